//! CSV and JSON emitters.

use std::fmt::Write;

use crate::config::Experiment;

pub fn header(experiment: Experiment) -> &'static str {
    match experiment {
        Experiment::PhaseDiagram => "gamma,delta,nm,class",
        Experiment::CoherenceDiagram => "theta,phi,nm,class",
        Experiment::CorrelationTrace => "n,distance,bound",
        Experiment::ThermoTrace => "n,delta_s,beta_q,heat,heat_dia,heat_coh,mutual_info",
        Experiment::HeatAlignment => "n,heat,delta_distance",
    }
}

/// Fixed 17-significant-digit scientific notation.
pub fn format_real(x: f64) -> String {
    format!("{x:.16e}")
}

pub struct Csv {
    text: String,
}

impl Csv {
    pub fn new(header: &str) -> Self {
        let mut text = String::with_capacity(4096);
        text.push_str(header);
        text.push('\n');
        Self { text }
    }

    pub fn row(&mut self, values: &[f64], label: Option<&str>) {
        for (i, v) in values.iter().enumerate() {
            if i > 0 {
                self.text.push(',');
            }
            self.text.push_str(&format_real(*v));
        }
        if let Some(l) = label {
            let _ = write!(self.text, ",{l}");
        }
        self.text.push('\n');
    }

    pub fn finish(self) -> String {
        self.text
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_significant_digits() {
        assert_eq!(format_real(0.1), "1.0000000000000001e-1");
        assert_eq!(format_real(1.0), "1.0000000000000000e0");
        let s = format_real(std::f64::consts::PI);
        assert_eq!(s.parse::<f64>().unwrap(), std::f64::consts::PI);
        assert_eq!(s.split('e').next().unwrap().replace('.', "").len(), 17);
    }

    #[test]
    fn rows_follow_header() {
        let mut csv = Csv::new("a,b,class");
        csv.row(&[1.0, -2.5], Some("Markovian"));
        assert_eq!(
            csv.finish(),
            "a,b,class\n1.0000000000000000e0,-2.5000000000000000e0,Markovian\n"
        );
    }
}
