//! Published mean ± std errors for optimizers this crate does not implement.
//! They are shown next to reproduced results for orientation only.

use upbo_core::benchmarks::FunctionId;

const DATA: &str = include_str!("../data/reference_values.csv");

pub const REFERENCE_OPTIMIZERS: [&str; 4] = ["CLPSO", "ICA", "CICA", "BA"];

#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceValue {
    pub function: FunctionId,
    pub optimizer: String,
    pub nfe: u64,
    pub mean: f64,
    pub std: f64,
    /// The values exactly as printed in the source table.
    pub mean_text: String,
    pub std_text: String,
}

pub fn reference_values() -> Vec<ReferenceValue> {
    let mut reader = csv::Reader::from_reader(DATA.as_bytes());
    reader
        .records()
        .map(|rec| {
            let rec = rec.expect("embedded reference data is valid CSV");
            ReferenceValue {
                function: rec[0].parse().expect("function id"),
                optimizer: rec[1].to_string(),
                nfe: rec[2].parse().expect("nfe"),
                mean: rec[3].parse().expect("mean"),
                std: rec[4].parse().expect("std"),
                mean_text: rec[3].to_string(),
                std_text: rec[4].to_string(),
            }
        })
        .collect()
}

pub fn lookup(function: FunctionId, optimizer: &str) -> Option<ReferenceValue> {
    reference_values().into_iter().find(|r| r.function == function && r.optimizer == optimizer)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complete_grid() {
        let all = reference_values();
        assert_eq!(all.len(), 80);
        for f in FunctionId::ALL {
            for o in REFERENCE_OPTIMIZERS {
                assert!(lookup(f, o).is_some(), "{f} {o}");
            }
        }
    }

    #[test]
    fn spot_values() {
        let r = lookup(FunctionId::F1, "CLPSO").unwrap();
        assert_eq!((r.mean_text.as_str(), r.std_text.as_str(), r.nfe), ("2.46E+00", "1.70E+00", 180_000));
        let r = lookup(FunctionId::F13, "BA").unwrap();
        assert_eq!((r.mean, r.std, r.nfe), (4.48, 0.189, 30_000));
        let r = lookup(FunctionId::F20, "ICA").unwrap();
        assert_eq!(r.mean_text, "2.81E+02");
        let r = lookup(FunctionId::F9, "CICA").unwrap();
        assert_eq!((r.mean, r.std), (9.34e-9, 3.42e-8));
    }
}
