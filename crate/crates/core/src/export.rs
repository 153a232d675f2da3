//! JSON-lines enumerations, text tables and DOT/text diagrams.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::certify::CertifyError;
use crate::compfactor::{canonical, enumerate_oriented_maps, exponentiate, orbit_decomposition};
use crate::fano::{all_collineations, Collineation, Line, Point};
use crate::g2::{delta_hat_census, IncidentPair, G2};
use crate::lifting::{classify_delta_star, AugAut, AugGroup};
use crate::octonion::OctonionAlgebra;
use crate::radon::{SignLineFn, SignPointFn};
use crate::scalar::Rational;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EnumTarget {
    Aut,
    AugAut,
    CompFactors,
    OrientedMaps,
}

impl FromStr for EnumTarget {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "aut" => Ok(EnumTarget::Aut),
            "aug-aut" => Ok(EnumTarget::AugAut),
            "comp-factors" => Ok(EnumTarget::CompFactors),
            "oriented-maps" => Ok(EnumTarget::OrientedMaps),
            other => Err(format!(
                "unknown target `{other}`; expected aut, aug-aut, comp-factors, oriented-maps"
            )),
        }
    }
}

fn err<E: std::fmt::Display>(e: E) -> CertifyError {
    CertifyError::Computation(e.to_string())
}

/// One JSON value per record, in a fixed order.
pub fn enumerate_records(target: EnumTarget, group: Option<&AugGroup>) -> Result<Vec<Value>, CertifyError> {
    Ok(match target {
        EnumTarget::Aut => all_collineations()
            .iter()
            .enumerate()
            .map(|(i, g)| json!({"index": i, "perm": g.to_string(), "order": g.order()}))
            .collect(),
        EnumTarget::AugAut => {
            let owned;
            let group = match group {
                Some(g) => g,
                None => {
                    owned = AugGroup::enumerate(&OctonionAlgebra::canonical()).map_err(err)?;
                    &owned
                }
            };
            group
                .elements()
                .iter()
                .map(|x| {
                    json!({
                        "base": x.base().to_string(),
                        "signs": x.signs().bits(),
                        "images": x.to_string(),
                        "order": x.order(),
                    })
                })
                .collect()
        }
        EnumTarget::CompFactors => {
            let mut out = Vec::new();
            for (k, orbit) in orbit_decomposition().iter().enumerate() {
                for e in orbit {
                    let mut v = serde_json::to_value(e).map_err(err)?;
                    v["orbit"] = json!(k);
                    out.push(v);
                }
            }
            out.sort_by(|a, b| a["key"].as_str().cmp(&b["key"].as_str()));
            out
        }
        EnumTarget::OrientedMaps => enumerate_oriented_maps()
            .iter()
            .map(|m| {
                let factor = exponentiate(m).map(|e| e.key_hex()).ok();
                json!({"alpha": m.forms(), "factor": factor})
            })
            .collect(),
    })
}

pub fn to_json_lines(records: &[Value]) -> String {
    records.iter().map(|r| format!("{r}\n")).collect()
}

/// The multiplication table, one row per line with a header.
pub fn octonion_table(alg: &OctonionAlgebra) -> String {
    let head = ["1", "e1", "e2", "e3", "e4", "e5", "e6", "e7"];
    let mut out = String::new();
    let _ = writeln!(out, "{:>4} |{}", "·", head.iter().map(|h| format!("{h:>4}")).collect::<String>());
    let _ = writeln!(out, "{}", "-".repeat(6 + 4 * 8));
    for (a, row) in alg.table().iter().enumerate() {
        let cells: String = row.iter().map(|x| format!("{:>4}", x.to_string())).collect();
        let _ = writeln!(out, "{:>4} |{cells}", head[a]);
    }
    out
}

/// All 441 brackets with orbit tags.
pub fn bracket_table(g: &G2<Rational>) -> Vec<crate::g2::BracketEntry> {
    let pairs = IncidentPair::all();
    pairs
        .iter()
        .flat_map(|a| pairs.iter().map(move |b| g.bracket_entry(a, b)))
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum DiagramFormat {
    Dot,
    Text,
}

impl FromStr for DiagramFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "dot" => Ok(DiagramFormat::Dot),
            "text" => Ok(DiagramFormat::Text),
            other => Err(format!("unknown format `{other}`; expected dot or text")),
        }
    }
}

fn sign_char(s: i8) -> char {
    if s == 1 {
        '+'
    } else {
        '-'
    }
}

/// The 8 colorings of the lines by `δ*(g, ·)`.
pub fn delta_star_diagram(format: DiagramFormat) -> String {
    let classes: BTreeMap<SignLineFn, Vec<Collineation>> = classify_delta_star(&canonical());
    let mut out = String::new();
    match format {
        DiagramFormat::Text => {
            let _ = writeln!(out, "point  D1 D2 D3 D4 D5 D6 D7  elements");
            for (f, members) in &classes {
                let point = match f.distinguished_point() {
                    Ok(Some(p)) => p.to_string(),
                    _ => "0".into(),
                };
                let cells: String = Line::ALL.iter().map(|&d| format!("{}  ", sign_char(f.at(d)))).collect();
                let _ = writeln!(out, "{point:<7}{cells}{:>8}", members.len());
            }
        }
        DiagramFormat::Dot => {
            for (k, (f, members)) in classes.iter().enumerate() {
                let point = match f.distinguished_point() {
                    Ok(Some(p)) => p.to_string(),
                    _ => "0".into(),
                };
                let _ = writeln!(out, "graph delta_star_{k} {{");
                let _ = writeln!(
                    out,
                    "  label=\"delta* class {k}: point {point}, {} elements, e.g. {}\";",
                    members.len(),
                    members[0]
                );
                for p in Point::ALL {
                    let _ = writeln!(out, "  {p} [shape=circle];");
                }
                for d in Line::ALL {
                    let s = f.at(d);
                    let color = if s == 1 { "black" } else { "red" };
                    let style = if s == 1 { "solid" } else { "dashed" };
                    let _ = writeln!(out, "  {d} [shape=box, color={color}, sign=\"{}\"];", sign_char(s));
                    for p in d.points() {
                        let _ = writeln!(out, "  {d} -- {p} [color={color}, style={style}];");
                    }
                }
                let _ = writeln!(out, "}}");
            }
        }
    }
    out
}

/// The 64 colorings of the points by `δ(ĝ, ·)` over the covering group.
pub fn delta_diagram(format: DiagramFormat, g: &G2<Rational>, group: &AugGroup) -> Result<String, CertifyError> {
    // Validates the properties while collecting the colorings.
    delta_hat_census(g, group).map_err(err)?;
    let mut classes: BTreeMap<SignPointFn, Vec<AugAut>> = BTreeMap::new();
    for x in group.elements() {
        classes.entry(g.delta_hat_fn(x).map_err(err)?).or_default().push(*x);
    }
    let mut out = String::new();
    match format {
        DiagramFormat::Text => {
            let _ = writeln!(out, "P1 P2 P3 P4 P5 P6 P7  elements  example");
            for (f, members) in &classes {
                let cells: Vec<String> = Point::ALL.iter().map(|&p| format!("{} ", sign_char(f.at(p)))).collect();
                let _ = writeln!(out, "{} {:>8}  {}", cells.join(" "), members.len(), members[0]);
            }
        }
        DiagramFormat::Dot => {
            for (k, (f, members)) in classes.iter().enumerate() {
                let _ = writeln!(out, "graph delta_{k} {{");
                let _ = writeln!(
                    out,
                    "  label=\"delta class {k}: {} elements, e.g. {}\";",
                    members.len(),
                    members[0]
                );
                for p in Point::ALL {
                    let s = f.at(p);
                    let color = if s == 1 { "black" } else { "red" };
                    let _ = writeln!(out, "  {p} [shape=circle, color={color}, sign=\"{}\"];", sign_char(s));
                }
                for d in Line::ALL {
                    let _ = writeln!(out, "  {d} [shape=box];");
                    for p in d.points() {
                        let _ = writeln!(out, "  {d} -- {p};");
                    }
                }
                let _ = writeln!(out, "}}");
            }
        }
    }
    Ok(out)
}
