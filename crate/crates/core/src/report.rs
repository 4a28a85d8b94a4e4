//! Serializable analysis reports and their text rendering.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::analysis::Analysis;
use crate::orbitcalc::KRank;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceSection {
    pub orientable: bool,
    pub genus: u32,
    pub b: u32,
    pub chi: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MorseSection {
    pub c0: usize,
    pub c1: usize,
    pub c2: usize,
    pub generic: bool,
    pub simple: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReebSection {
    pub nodes: usize,
    pub edges: usize,
    pub l: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MinimalSection {
    #[serde(rename = "rC")]
    pub r_c: usize,
    #[serde(rename = "rE")]
    pub r_e: usize,
    pub contractions: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomotopySection {
    pub stabilizer_id: String,
    pub orbit: String,
    pub orbit_f: String,
    pub pi0_leaf: String,
    pub higher_pi_rule: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GSection {
    pub level: String,
    pub order_bound: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Pi1Section {
    pub diff_id: String,
    pub free_rank: Option<KRank>,
    #[serde(rename = "G")]
    pub g: Option<GSection>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodimSection {
    pub orbit: usize,
    pub orbit_cr: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HomologySection {
    pub h1_rank: usize,
    pub l: usize,
    pub twists_independent: Option<bool>,
    pub twists_independent_mod2: bool,
    pub curves_independent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub surface: SurfaceSection,
    pub morse: MorseSection,
    pub reeb: ReebSection,
    pub minimal: Option<MinimalSection>,
    pub k: Option<KRank>,
    pub homotopy: HomotopySection,
    pub pi1: Pi1Section,
    pub codim: CodimSection,
    #[serde(rename = "type")]
    pub saddle_free_type: Option<String>,
    pub homology: Option<HomologySection>,
    pub flags: Vec<String>,
}

impl Report {
    pub fn from_analysis(a: &Analysis) -> Report {
        let r = &a.report;
        Report {
            surface: SurfaceSection {
                orientable: a.class.orientable,
                genus: a.class.genus,
                b: a.class.boundary_count,
                chi: a.chi,
            },
            morse: MorseSection {
                c0: a.morse.c0,
                c1: a.morse.c1,
                c2: a.morse.c2,
                generic: a.morse.is_generic,
                simple: a.morse.is_simple,
            },
            reeb: ReebSection { nodes: a.graph.node_count(), edges: a.graph.edge_count(), l: r.l },
            minimal: a.minimal.as_ref().map(|m| MinimalSection { r_c: m.r_c, r_e: m.r_e, contractions: m.contractions() }),
            k: r.k,
            homotopy: HomotopySection {
                stabilizer_id: r.stabilizer_id.to_string(),
                orbit: r.orbit.to_string(),
                orbit_f: r.orbit_f.to_string(),
                pi0_leaf: r.pi0_leaf.to_string(),
                higher_pi_rule: r.higher_pi_rule.to_string(),
            },
            pi1: Pi1Section {
                diff_id: r.diff_id.to_string(),
                free_rank: r.k,
                g: r.g.map(|g| GSection { level: g.level.to_string(), order_bound: g.order_bound }),
            },
            codim: CodimSection { orbit: r.codim_orbit, orbit_cr: r.codim_orbit_cr },
            saddle_free_type: r.saddle_free.map(|t| t.letter().to_string()),
            homology: a.twists.as_ref().map(|t| HomologySection {
                h1_rank: t.h1_rank,
                l: t.l,
                twists_independent: t.independent,
                twists_independent_mod2: t.independent_mod2,
                curves_independent: t.curves_independent,
            }),
            flags: r.flags.clone(),
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let value = serde_json::to_value(self).expect("report serializes");
        let mut out = String::new();
        render(&value, "", &mut out);
        out
    }
}

fn scalar(v: &serde_json::Value) -> String {
    match v {
        serde_json::Value::Null => "-".to_string(),
        serde_json::Value::String(s) => s.clone(),
        serde_json::Value::Array(items) => {
            format!("[{}]", items.iter().map(scalar).collect::<Vec<_>>().join(", "))
        }
        other => other.to_string(),
    }
}

fn render(v: &serde_json::Value, indent: &str, out: &mut String) {
    let serde_json::Value::Object(map) = v else { return };
    for (key, value) in map {
        match value {
            serde_json::Value::Object(_) => {
                let _ = writeln!(out, "{indent}{key}:");
                render(value, &format!("{indent}  "), out);
            }
            _ => {
                let _ = writeln!(out, "{indent}{key}: {}", scalar(value));
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::{analyze, AnalysisOptions};
    use crate::corpus;

    #[test]
    fn json_round_trip_and_field_names() {
        let (s, f) = corpus::torus_height(8, 8);
        let r = Report::from_analysis(&analyze(&s, &f, AnalysisOptions::default()).unwrap());
        let text = r.to_json();
        assert_eq!(serde_json::from_str::<Report>(&text).unwrap(), r);
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["homotopy"]["orbit"], "(S1)^3");
        assert_eq!(v["k"], 1);
        assert_eq!(v["minimal"]["rC"], 1);
        assert_eq!(v["pi1"]["G"]["level"], "exact-trivial");
        assert!(v["type"].is_null());
        let t = r.to_text();
        assert!(t.contains("orbit: (S1)^3"));
        assert!(t.contains("minimal:\n  rC: 1"));
    }
}
