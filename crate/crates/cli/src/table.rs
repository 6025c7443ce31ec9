//! CSV encodings of spectrum and constraint tables.
//!
//! Floats are written in scientific notation with twelve significant
//! digits and records end in a bare line feed, so identical inputs give
//! byte-identical files.

use dol_core::{ConstraintTable, SpectrumTable};

pub const SPECTRUM_HEADER: [&str; 4] = ["n", "phi_n", "phi_n_plus_1", "energy"];

pub const CONSTRAINT_HEADER: [&str; 7] = [
    "n",
    "x",
    "y",
    "raise_upper",
    "raise_lower",
    "lower_upper",
    "lower_lower",
];

pub fn fmt_float(v: f64) -> String {
    format!("{v:.11e}")
}

fn write_rows<const K: usize>(
    header: [&str; K],
    rows: impl Iterator<Item = Vec<String>>,
) -> String {
    let mut w = csv::WriterBuilder::new()
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("in-memory flush")).expect("ascii output")
}

pub fn spectrum_csv(table: &SpectrumTable<f64>) -> String {
    write_rows(
        SPECTRUM_HEADER,
        table.rows.iter().map(|r| {
            vec![
                r.n.to_string(),
                fmt_float(r.phi_n),
                fmt_float(r.phi_n1),
                fmt_float(r.energy),
            ]
        }),
    )
}

pub fn constraint_csv(table: &ConstraintTable) -> String {
    write_rows(
        CONSTRAINT_HEADER,
        table.rows.iter().map(|r| {
            let mut row = vec![r.n.to_string()];
            row.extend(
                [
                    r.x,
                    r.y,
                    r.raise_upper,
                    r.raise_lower,
                    r.lower_upper,
                    r.lower_lower,
                ]
                .map(fmt_float),
            );
            row
        }),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use dol_core::{spectrum_table, SpectrumBranch};

    #[test]
    fn float_format_has_twelve_digits() {
        assert_eq!(fmt_float(0.5), "5.00000000000e-1");
        assert_eq!(fmt_float(0.0), "0.00000000000e0");
        assert_eq!(fmt_float(-1234.5), "-1.23450000000e3");
    }

    #[test]
    fn spectrum_layout() {
        let t = spectrum_table(1.0, SpectrumBranch::CaseA, 2).unwrap();
        assert_eq!(
            spectrum_csv(&t),
            "n,phi_n,phi_n_plus_1,energy\n\
             0,0.00000000000e0,1.00000000000e0,5.00000000000e-1\n\
             1,1.00000000000e0,2.00000000000e0,1.50000000000e0\n\
             2,2.00000000000e0,3.00000000000e0,2.50000000000e0\n"
        );
    }

    #[test]
    fn output_is_deterministic() {
        let a = spectrum_csv(&spectrum_table(0.59, SpectrumBranch::CaseBPlus, 10).unwrap());
        let b = spectrum_csv(&spectrum_table(0.59, SpectrumBranch::CaseBPlus, 10).unwrap());
        assert_eq!(a, b);
        assert!(!a.contains('\r'));
        assert_eq!(a.lines().count(), 12);
    }
}
