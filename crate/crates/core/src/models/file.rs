//! JSON model files.
//!
//! ```json
//! {"type":"preferential","states":["x","y"],"distinguished":["x","y"],
//!  "order":[["x","y"]],"valuation":{"p":["x"]}}
//! {"type":"multimeasure","states":["u","v"],
//!  "measures":[{"u":"3/5","v":"2/5"}],"valuation":{"p":["u"]}}
//! {"type":"distinguished","states":["u","v"],"plus":["u"],"valuation":{}}
//! ```
//!
//! `["x","y"]` in `order` means `x ⪰ y`. Weights are `"num/den"` strings;
//! states missing from a measure have weight zero. Unknown keys are errors.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "lowercase", deny_unknown_fields)]
pub enum ModelSpec {
    Preferential(PreferentialSpec),
    #[serde(rename = "multimeasure")]
    MultiMeasure(MultiMeasureSpec),
    Distinguished(DistinguishedSpec),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PreferentialSpec {
    pub states: Vec<String>,
    pub distinguished: Vec<String>,
    pub order: Vec<(String, String)>,
    pub valuation: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MultiMeasureSpec {
    pub states: Vec<String>,
    pub measures: Vec<BTreeMap<String, String>>,
    pub valuation: BTreeMap<String, Vec<String>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DistinguishedSpec {
    pub states: Vec<String>,
    pub plus: Vec<String>,
    pub valuation: BTreeMap<String, Vec<String>>,
}

fn strings(xs: &[&str]) -> Vec<String> {
    xs.iter().map(|s| s.to_string()).collect()
}

fn valuation(v: &[(&str, &[&str])]) -> BTreeMap<String, Vec<String>> {
    v.iter().map(|(p, s)| (p.to_string(), strings(s))).collect()
}

impl PreferentialSpec {
    pub fn new(
        states: &[&str],
        distinguished: &[&str],
        order: &[(&str, &str)],
        val: &[(&str, &[&str])],
    ) -> Self {
        PreferentialSpec {
            states: strings(states),
            distinguished: strings(distinguished),
            order: order
                .iter()
                .map(|(a, b)| (a.to_string(), b.to_string()))
                .collect(),
            valuation: valuation(val),
        }
    }
}

impl MultiMeasureSpec {
    pub fn new(states: &[&str], measures: &[&[(&str, &str)]], val: &[(&str, &[&str])]) -> Self {
        MultiMeasureSpec {
            states: strings(states),
            measures: measures
                .iter()
                .map(|m| m.iter().map(|(s, w)| (s.to_string(), w.to_string())).collect())
                .collect(),
            valuation: valuation(val),
        }
    }
}

impl DistinguishedSpec {
    pub fn new(states: &[&str], plus: &[&str], val: &[(&str, &[&str])]) -> Self {
        DistinguishedSpec {
            states: strings(states),
            plus: strings(plus),
            valuation: valuation(val),
        }
    }
}
