//! Serialization of flag matrices: JSON with exact rationals, CSV with a
//! decimal column and an exact sidecar, LaTeX arrays and aligned text.

use std::fmt::Write as _;

use num_traits::Signed;
use serde::{Deserialize, Serialize};

use super::{BasisId, ExpressionTable, FlagMatrix};
use crate::error::{Error, Result};
use crate::tracepoly::{rational_to_f64, Rational, TermRecord};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct MatrixJson {
    pub mode: String,
    pub basis_id: BasisId,
    pub k: u32,
    pub basis: Vec<String>,
    pub block_bounds: Vec<usize>,
    /// Row-major exact entries as `"p/q"` strings.
    pub entries: Vec<Vec<String>>,
}

impl MatrixJson {
    pub fn exact_entries(&self) -> Result<Vec<Vec<Rational>>> {
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|s| s.parse().map_err(|_| Error::Parse(format!("invalid rational `{s}`"))))
                    .collect()
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpressionColumn {
    pub generator: Vec<u32>,
    pub label: String,
    pub laplacian: Vec<TermRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExpressionTableJson {
    pub mode: String,
    pub basis_id: BasisId,
    pub k: u32,
    pub columns: Vec<ExpressionColumn>,
}

fn latex_rational(r: &Rational) -> String {
    if r.is_integer() {
        return r.to_string();
    }
    let sign = if r.is_negative() { "-" } else { "" };
    format!("{sign}\\frac{{{}}}{{{}}}", r.numer().abs(), r.denom())
}

/// `p_1^2p_2` becomes `p_1^2 p_2`.
fn latex_label(label: &str) -> String {
    let mut out = String::new();
    let mut after_exponent = false;
    for ch in label.chars() {
        if ch == 'p' && after_exponent {
            out.push(' ');
        }
        if ch == '^' {
            after_exponent = true;
        } else if !ch.is_ascii_digit() {
            after_exponent = false;
        }
        out.push(ch);
    }
    out
}

impl FlagMatrix {
    pub fn to_json(&self) -> MatrixJson {
        MatrixJson {
            mode: self.mode().to_string(),
            basis_id: self.basis.id,
            k: self.k(),
            basis: self.basis.labels(),
            block_bounds: self.block_bounds.clone(),
            entries: self
                .entries
                .iter()
                .map(|row| row.iter().map(ToString::to_string).collect())
                .collect(),
        }
    }

    /// Long-format CSV: one line per entry, decimal value plus exact string.
    pub fn to_csv(&self) -> String {
        let labels = self.basis.labels();
        let mut out = String::new();
        writeln!(out, "# mode={} basis_id={} k={}", self.mode(), self.basis.id, self.k()).unwrap();
        writeln!(out, "# basis={}", labels.join(";")).unwrap();
        writeln!(out, "row,column,value,exact").unwrap();
        for (i, row) in self.entries.iter().enumerate() {
            for (j, x) in row.iter().enumerate() {
                writeln!(out, "{},{},{},{}", labels[i], labels[j], rational_to_f64(x), x).unwrap();
            }
        }
        out
    }

    /// `array` environment with `Δ`-headed columns and basis-labelled rows.
    pub fn to_latex(&self) -> String {
        let labels: Vec<String> = self.basis.labels().iter().map(|l| latex_label(l)).collect();
        let mut out = String::new();
        writeln!(
            out,
            "% mode={} basis_id={} k={} basis={}",
            self.mode(),
            self.basis.id,
            self.k(),
            self.basis.labels().join(";")
        )
        .unwrap();
        writeln!(out, "\\begin{{array}}{{c|{}}}", "c".repeat(self.dim())).unwrap();
        let header: Vec<String> = labels.iter().map(|l| format!("\\Delta {l}")).collect();
        writeln!(out, "&{} \\\\", header.join(" & ")).unwrap();
        writeln!(out, "\\hline").unwrap();
        for (i, row) in self.entries.iter().enumerate() {
            let cells: Vec<String> = row.iter().map(latex_rational).collect();
            write!(out, "{} & {}", labels[i], cells.join(" & ")).unwrap();
            if i + 1 < self.dim() {
                out.push_str(" \\\\");
            }
            out.push('\n');
        }
        out.push_str("\\end{array}\n");
        out
    }

    /// Column-aligned text with the basis order in the header.
    pub fn to_pretty(&self) -> String {
        let labels = self.basis.labels();
        let mut grid: Vec<Vec<String>> = vec![std::iter::once(String::new())
            .chain(labels.iter().map(|l| format!("Δ{l}")))
            .collect()];
        for (i, row) in self.entries.iter().enumerate() {
            grid.push(std::iter::once(labels[i].clone()).chain(row.iter().map(ToString::to_string)).collect());
        }
        let widths: Vec<usize> = (0..=self.dim())
            .map(|c| grid.iter().map(|r| r[c].chars().count()).max().unwrap_or(0))
            .collect();
        let mut out = String::new();
        writeln!(out, "mode={} basis_id={} k={}", self.mode(), self.basis.id, self.k()).unwrap();
        for row in grid {
            let cells: Vec<String> = row
                .iter()
                .zip(&widths)
                .map(|(cell, w)| format!("{cell:>w$}", w = *w))
                .collect();
            writeln!(out, "{}", cells.join("  ").trim_end()).unwrap();
        }
        out
    }
}

impl ExpressionTable {
    pub fn to_json(&self) -> ExpressionTableJson {
        let basis = super::basis_for(crate::tracepoly::Mode::Symbolic, BasisId::Partition, self.k)
            .expect("partition spanning set");
        ExpressionTableJson {
            mode: crate::tracepoly::Mode::Symbolic.to_string(),
            basis_id: BasisId::Partition,
            k: self.k,
            columns: self
                .generators
                .iter()
                .zip(&self.columns)
                .enumerate()
                .map(|(i, (g, col))| ExpressionColumn {
                    generator: g.parts().to_vec(),
                    label: basis.label(i),
                    laplacian: col.to_records(),
                })
                .collect(),
        }
    }

    /// One `Δ generator = expression` line per generator.
    pub fn to_pretty(&self) -> String {
        let basis = super::basis_for(crate::tracepoly::Mode::Symbolic, BasisId::Partition, self.k)
            .expect("partition spanning set");
        let mut out = String::new();
        writeln!(out, "mode=generaln basis_id=partition k={}", self.k).unwrap();
        for (i, col) in self.columns.iter().enumerate() {
            writeln!(out, "Δ{} = {}", basis.label(i), col.pretty()).unwrap();
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::flagmatrix::build_matrix;
    use crate::tracepoly::Mode;

    #[test]
    fn labels_and_fractions() {
        assert_eq!(latex_label("p_1^2p_2"), "p_1^2 p_2");
        assert_eq!(latex_label("p_1p_2"), "p_1p_2");
        assert_eq!(latex_rational(&crate::tracepoly::rat(-15, 2)), "-\\frac{15}{2}");
        assert_eq!(latex_rational(&crate::tracepoly::int(8)), "8");
    }

    #[test]
    fn json_round_trip() {
        let m = build_matrix(Mode::SO4, BasisId::So4, 3).unwrap();
        let text = serde_json::to_string(&m.to_json()).unwrap();
        let back: MatrixJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.exact_entries().unwrap(), m.entries);
        assert_eq!(back.basis, m.basis.labels());
    }

    #[test]
    fn csv_has_sidecar() {
        let m = build_matrix(Mode::SO4, BasisId::So4, 1).unwrap();
        let csv = m.to_csv();
        assert!(csv.contains("p_1,p_1,-1.5,-3/2"));
        assert_eq!(csv.lines().count(), 3 + 4);
    }
}
