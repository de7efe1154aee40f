//! Analysis-report assembly and rendering (text, JSON, CSV).

use rkstab::classify::{classify_method, Status};
use rkstab::energy::{expand_energy, leading_data};
use rkstab::polynomial::StabilityPolynomial;
use rkstab::rational::{format_rational, to_f64};
use serde_json::{json, Value};

/// Everything `analyze` reports about one method.
pub struct AnalysisReport {
    pub method: String,
    pub p: usize,
    pub k_star: usize,
    pub beta_star_exact: String,
    pub beta_star_float: f64,
    pub gamma_star_exact: Vec<Vec<String>>,
    /// Value-descending (machine order); the text renderer re-sorts by
    /// magnitude for display.
    pub gamma_star_eigenvalues: Vec<f64>,
    pub status: Status,
    pub notes: Vec<String>,
}

impl AnalysisReport {
    pub fn build(method: String, r: &StabilityPolynomial, extra_notes: Vec<String>) -> Self {
        let verdict = classify_method(r);
        let lead = leading_data(&expand_energy(r));
        let mut notes = verdict.notes.clone();
        notes.extend(extra_notes);
        AnalysisReport {
            method,
            p: r.linear_order(),
            k_star: verdict.k_star,
            beta_star_exact: format_rational(&verdict.beta_star),
            beta_star_float: to_f64(&verdict.beta_star),
            gamma_star_exact: lead
                .gamma_star
                .iter()
                .map(|row| row.iter().map(format_rational).collect())
                .collect(),
            gamma_star_eigenvalues: verdict.gamma_star_eigenvalues,
            status: verdict.status,
            notes,
        }
    }

    /// Process exit code: 0 strongly stable, 1 not, 2 undetermined.
    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::StronglyStable => 0,
            Status::NotStronglyStable => 1,
            Status::Undetermined => 2,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "method": self.method,
            "p": self.p,
            "k_star": self.k_star,
            "beta_star": {
                "exact": self.beta_star_exact,
                "float": self.beta_star_float,
            },
            "gamma_star": {
                "exact": self.gamma_star_exact,
                "eigenvalues": self.gamma_star_eigenvalues,
            },
            "verdict": self.status.to_string(),
            "notes": self.notes,
        })
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!("method  : {}\n", self.method));
        out.push_str(&format!("p       : {}\n", self.p));
        out.push_str(&format!("k*      : {}\n", self.k_star));
        out.push_str(&format!(
            "beta*   : {} ({})\n",
            self.beta_star_exact,
            fmt_sig6(self.beta_star_float)
        ));
        for (i, row) in self.gamma_star_exact.iter().enumerate() {
            let head = if i == 0 { "gamma*  :" } else { "         " };
            out.push_str(&format!("{head} [{}]\n", row.join(", ")));
        }
        out.push_str(&format!(
            "lambda  : {}\n",
            join_by_magnitude(&self.gamma_star_eigenvalues)
        ));
        out.push_str(&format!("verdict : {}\n", self.status));
        if !self.notes.is_empty() {
            out.push_str(&format!("notes   : {}\n", self.notes.join("; ")));
        }
        out
    }

    pub fn render_csv(&self) -> String {
        let mut out = String::from(
            "method,p,k_star,beta_star_exact,beta_star_float,eigenvalues,verdict,notes\n",
        );
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            csv_field(&self.method),
            self.p,
            self.k_star,
            csv_field(&self.beta_star_exact),
            fmt_sig6(self.beta_star_float),
            csv_field(&join_by_magnitude(&self.gamma_star_eigenvalues)),
            self.status,
            csv_field(&self.notes.join("; ")),
        ));
        out
    }
}

/// Six significant digits: plain decimal for magnitudes in `[1, 10)`,
/// scientific otherwise (mirrors how the reference tables print).
pub fn fmt_sig6(x: f64) -> String {
    if x == 0.0 {
        return "0.00000".to_string();
    }
    let a = x.abs();
    if (1.0..10.0).contains(&a) {
        format!("{x:.5}")
    } else {
        format!("{x:.5e}")
    }
}

/// Eigenvalues joined for display, largest magnitude first.
pub fn join_by_magnitude(eigs: &[f64]) -> String {
    let mut sorted = eigs.to_vec();
    sorted.sort_by(|a, b| b.abs().total_cmp(&a.abs()));
    sorted
        .iter()
        .map(|x| fmt_sig6(*x))
        .collect::<Vec<_>>()
        .join(", ")
}

/// Minimal CSV quoting: wrap fields containing separators or quotes.
pub fn csv_field(s: &str) -> String {
    if s.contains(',') || s.contains('"') || s.contains('\n') {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digit_formatting() {
        assert_eq!(fmt_sig6(0.0), "0.00000");
        assert_eq!(fmt_sig6(-1.3090169943749475), "-1.30902");
        assert_eq!(fmt_sig6(-0.0657415), "-6.57415e-2");
        assert_eq!(fmt_sig6(-7.87018e-11), "-7.87018e-11");
        assert_eq!(fmt_sig6(-22.838), "-2.28380e1");
    }

    #[test]
    fn csv_quoting() {
        assert_eq!(csv_field("taylor(4)^2"), "taylor(4)^2");
        assert_eq!(csv_field("alpha [1, 1/2]"), "\"alpha [1, 1/2]\"");
        assert_eq!(csv_field("a\"b"), "\"a\"\"b\"");
    }

    #[test]
    fn magnitude_ordering() {
        let joined = join_by_magnitude(&[5.6e-3, -1.3, -7.9e-2]);
        assert_eq!(joined, "-1.30000, -7.90000e-2, 5.60000e-3");
    }

    #[test]
    fn report_round_trips_json() {
        let r = StabilityPolynomial::taylor(7).unwrap();
        let report = AnalysisReport::build("taylor(7)".to_string(), &r, vec![]);
        assert_eq!(report.exit_code(), 0);
        let text = serde_json::to_string_pretty(&report.to_json()).unwrap();
        let reparsed: Value = serde_json::from_str(&text).unwrap();
        assert_eq!(serde_json::to_string_pretty(&reparsed).unwrap(), text);
        assert_eq!(reparsed["beta_star"]["exact"], "-1/20160");
        assert_eq!(reparsed["k_star"], 4);
    }
}
