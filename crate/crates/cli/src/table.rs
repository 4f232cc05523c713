//! CSV rows shared by every solving command.

use std::fs::OpenOptions;
use std::io::Write;
use std::path::Path;

use crate::error::CliError;

pub const HEADER: [&str; 11] = [
    "method",
    "k",
    "n_triangles",
    "n_edges",
    "alpha",
    "tol",
    "iterations",
    "converged",
    "rel_error",
    "final_residual",
    "wall_time_s",
];

/// One output row; `None` fields are written empty.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Row {
    pub method: String,
    pub k: Option<f64>,
    pub n_triangles: Option<usize>,
    pub n_edges: Option<usize>,
    pub alpha: Option<f64>,
    pub tol: f64,
    pub iterations: Option<usize>,
    pub converged: bool,
    pub rel_error: Option<f64>,
    pub final_residual: Option<f64>,
    pub wall_time_s: f64,
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

impl Row {
    pub fn fields(&self) -> [String; 11] {
        [
            self.method.clone(),
            opt(self.k),
            opt(self.n_triangles),
            opt(self.n_edges),
            opt(self.alpha),
            self.tol.to_string(),
            opt(self.iterations),
            self.converged.to_string(),
            opt(self.rel_error),
            opt(self.final_residual),
            format!("{:.3}", self.wall_time_s),
        ]
    }
}

/// Appends rows to `path`, writing the header first when the file is new or
/// empty; without a path the rows go to stdout.
pub struct Sink {
    writer: csv::Writer<Box<dyn Write>>,
}

impl Sink {
    pub fn open(path: Option<&Path>) -> Result<Self, CliError> {
        let (inner, need_header): (Box<dyn Write>, bool) = match path {
            Some(p) => {
                let file = OpenOptions::new().create(true).append(true).open(p)?;
                let empty = file.metadata()?.len() == 0;
                (Box::new(file), empty)
            }
            None => (Box::new(std::io::stdout()), true),
        };
        let mut writer = csv::WriterBuilder::new().has_headers(false).from_writer(inner);
        if need_header {
            writer.write_record(HEADER)?;
            writer.flush()?;
        }
        Ok(Self { writer })
    }

    pub fn write(&mut self, row: &Row) -> Result<(), CliError> {
        self.writer.write_record(row.fields())?;
        // rows are flushed one by one so long sweeps leave partial results behind
        self.writer.flush()?;
        Ok(())
    }
}

/// Least-squares slope of `log err` against `log √F`, negated.
pub fn fitted_order(n_triangles: &[usize], errors: &[f64]) -> Option<f64> {
    if n_triangles.len() < 2 || n_triangles.len() != errors.len() || errors.iter().any(|e| *e <= 0.0) {
        return None;
    }
    let xs: Vec<f64> = n_triangles.iter().map(|&f| (f as f64).sqrt().ln()).collect();
    let ys: Vec<f64> = errors.iter().map(|e| e.ln()).collect();
    let n = xs.len() as f64;
    let (mx, my) = (xs.iter().sum::<f64>() / n, ys.iter().sum::<f64>() / n);
    let sxy: f64 = xs.iter().zip(&ys).map(|(x, y)| (x - mx) * (y - my)).sum();
    let sxx: f64 = xs.iter().map(|x| (x - mx).powi(2)).sum();
    (sxx > 0.0).then(|| -sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn order_of_exact_power_law() {
        let f = [320, 1280, 5120];
        let e: Vec<f64> = f.iter().map(|&f| 3.0 * (f as f64).sqrt().powf(-1.5)).collect();
        assert!((fitted_order(&f, &e).unwrap() - 1.5).abs() < 1e-12);
        assert!(fitted_order(&f[..1], &e[..1]).is_none());
        assert!(fitted_order(&f, &[0.1, 0.0, 0.01]).is_none());
    }

    #[test]
    fn empty_fields_for_missing_values() {
        let row = Row {
            method: "mfie".into(),
            tol: 1e-5,
            ..Row::default()
        };
        let f = row.fields();
        assert_eq!(f[0], "mfie");
        assert_eq!(f[1], "");
        assert_eq!(f[5], "0.00001");
        assert_eq!(f[7], "false");
    }
}
