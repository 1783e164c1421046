//! JSON form of a trace polynomial: a list of
//! `{"partition": [parts], "coeff": {"exponent": "p/q"}}` records.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{Mode, NPoly, Rational, TracePoly};
use crate::error::{Error, Result};
use crate::partitions::Partition;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRecord {
    pub partition: Vec<u32>,
    pub coeff: BTreeMap<u32, String>,
}

impl TracePoly {
    pub fn to_records(&self) -> Vec<TermRecord> {
        self.terms()
            .map(|(lambda, c)| TermRecord {
                partition: lambda.parts().to_vec(),
                coeff: c.terms().map(|(e, r)| (e, r.to_string())).collect(),
            })
            .collect()
    }

    pub fn from_records(records: &[TermRecord], mode: Mode) -> Result<TracePoly> {
        let mut out = TracePoly::zero(mode);
        for rec in records {
            let mut coeff = NPoly::zero();
            for (e, s) in &rec.coeff {
                let r: Rational = s
                    .parse()
                    .map_err(|_| Error::Parse(format!("invalid rational `{s}`")))?;
                coeff.add_term(*e, r);
            }
            if mode.numeric_n().is_some() && coeff.as_constant().is_none() {
                return Err(Error::Parse(format!(
                    "coefficient of {:?} depends on N in numeric mode {mode}",
                    rec.partition
                )));
            }
            out.add_term(Partition::new(rec.partition.iter().copied()), coeff);
        }
        Ok(out)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self.to_records()).expect("records serialize")
    }

    pub fn from_json(value: &serde_json::Value, mode: Mode) -> Result<TracePoly> {
        let records: Vec<TermRecord> =
            serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
        Self::from_records(&records, mode)
    }
}
