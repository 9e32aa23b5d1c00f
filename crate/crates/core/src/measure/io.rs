//! JSON encoding of measures and the `builtin:name(args)` shorthand.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::{builtin_law, cheb_nodes, Measure, Panel, PanelMap, SupportKind, Tail};
use crate::error::{Error, Result};

/// Trailing-coefficient tolerance used to choose the number of points written
/// per panel.
pub const EMIT_TOL: f64 = 1e-14;

/// Largest mass defect the loader silently renormalizes.
const RENORMALIZE_LIMIT: f64 = 1e-6;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct BuiltinSpec {
    pub name: String,
    #[serde(default)]
    pub params: BTreeMap<String, f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PanelSpec {
    pub a: f64,
    pub b: f64,
    /// Density values at the panel's interpolation points.
    pub values: Vec<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub map: Option<String>,
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize, PartialEq)]
pub struct TailSpec {
    #[serde(rename = "T")]
    pub t0: f64,
    pub c: f64,
    pub alpha: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct Metadata {
    pub mass: f64,
    /// Moments of order 1 to 4; `null` when infinite or undefined.
    pub moments: Vec<Option<f64>>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct MeasureSpec {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub builtin: Option<BuiltinSpec>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub atoms: Vec<[f64; 2]>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub panels: Vec<PanelSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail: Option<TailSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub support_kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<Metadata>,
}

fn kind_name(k: SupportKind) -> &'static str {
    match k {
        SupportKind::Nonnegative => "nonnegative",
        SupportKind::Symmetric => "symmetric",
        SupportKind::General => "general",
    }
}

fn parse_kind(s: &str) -> Result<SupportKind> {
    match s {
        "nonnegative" => Ok(SupportKind::Nonnegative),
        "symmetric" => Ok(SupportKind::Symmetric),
        "general" => Ok(SupportKind::General),
        _ => Err(Error::InvalidMeasure(format!("unknown support kind {s}"))),
    }
}

fn positional_names(name: &str) -> &'static [&'static str] {
    match name {
        "marchenko_pastur" | "mp" => &["lambda"],
        "free_beta_prime" | "fbp" => &["a", "b"],
        "inverse_mp" => &["lambda"],
        "free_gig" | "fgig" => &["lambda"],
        "semicircle" => &["m", "sigma"],
        "bernoulli" => &["p", "x0", "x1"],
        "point" | "dirac" => &["c"],
        _ => &[],
    }
}

/// Parses `builtin:name(args)` where `args` are positional values or
/// `key=value` pairs, e.g. `builtin:free_beta_prime(2,1)`.
pub fn parse_uri(uri: &str) -> Result<BuiltinSpec> {
    let bad = || Error::InvalidParams(format!("malformed measure shorthand {uri:?}"));
    let body = uri.strip_prefix("builtin:").ok_or_else(bad)?.trim();
    let (name, args) = match body.find('(') {
        Some(i) => {
            let inner = body[i + 1..].strip_suffix(')').ok_or_else(bad)?;
            (body[..i].trim(), inner)
        }
        None => (body, ""),
    };
    let names = positional_names(name);
    let mut params = BTreeMap::new();
    for (k, arg) in args.split(',').map(str::trim).filter(|s| !s.is_empty()).enumerate() {
        let (key, val) = match arg.split_once('=') {
            Some((k, v)) => (k.trim().to_string(), v.trim()),
            None => (names.get(k).ok_or_else(bad)?.to_string(), arg),
        };
        params.insert(key, val.parse::<f64>().map_err(|_| bad())?);
    }
    Ok(BuiltinSpec {
        name: name.to_string(),
        params,
    })
}

impl MeasureSpec {
    pub fn to_measure(&self) -> Result<Measure> {
        if let Some(b) = &self.builtin {
            let params: Vec<(&str, f64)> = b.params.iter().map(|(k, v)| (k.as_str(), *v)).collect();
            return builtin_law(&b.name, &params);
        }
        let atoms: Vec<(f64, f64)> = self.atoms.iter().map(|a| (a[0], a[1])).collect();
        let mut panels = vec![];
        for p in &self.panels {
            let map = match &p.map {
                Some(s) => PanelMap::parse(s).ok_or_else(|| Error::InvalidMeasure(format!("unknown panel map {s}")))?,
                None => PanelMap::BothSqrt,
            };
            if p.values.len() < 2 {
                return Err(Error::InvalidMeasure("panel needs at least two values".into()));
            }
            panels.push(Panel::cheb_from_samples(p.a, p.b, map, &p.values));
        }
        let tail = self.tail.map(|t| Tail {
            t0: t.t0,
            c: t.c,
            alpha: t.alpha,
        });
        let kind = match &self.support_kind {
            Some(s) => parse_kind(s)?,
            None => {
                let neg = atoms.iter().any(|a| a.0 < 0.0) || panels.iter().any(|p| p.a < 0.0);
                if neg {
                    SupportKind::General
                } else {
                    SupportKind::Nonnegative
                }
            }
        };
        let mut m = Measure::new_unchecked(atoms, panels, tail, kind);
        let mass = m.total_mass();
        let defect = mass - 1.0;
        if defect.abs() > 1e-9 && defect.abs() <= RENORMALIZE_LIMIT {
            m = m.scaled(1.0 / mass);
        }
        m.validate()?;
        Ok(m)
    }

    /// Explicit (or builtin) encoding with a metadata block.
    pub fn from_measure(m: &Measure) -> Self {
        let mut spec = match m.builtin() {
            Some(b) => MeasureSpec {
                builtin: Some(BuiltinSpec {
                    name: b.name().to_string(),
                    params: b.params().into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
                }),
                atoms: vec![],
                panels: vec![],
                tail: None,
                support_kind: None,
                metadata: None,
            },
            None => MeasureSpec {
                builtin: None,
                atoms: m.atoms().iter().map(|a| [a.0, a.1]).collect(),
                panels: m
                    .panels()
                    .iter()
                    .map(|p| PanelSpec {
                        a: p.a,
                        b: p.b,
                        values: p.sample_values(
                            p.cheb_len()
                                .unwrap_or_else(|| p.to_cheb(EMIT_TOL).cheb_len().unwrap_or(32)),
                        ),
                        map: Some(p.map.name().to_string()),
                    })
                    .collect(),
                tail: m.tail().map(|t| TailSpec {
                    t0: t.t0,
                    c: t.c,
                    alpha: t.alpha,
                }),
                support_kind: Some(kind_name(m.kind()).to_string()),
                metadata: None,
            },
        };
        let moments = (1..=4)
            .map(|p| m.moment(p as f64).ok().filter(|v| v.is_finite()))
            .collect();
        spec.metadata = Some(Metadata {
            mass: m.total_mass(),
            moments,
        });
        spec
    }
}

/// Parses a JSON measure document.
pub fn from_json(text: &str) -> Result<Measure> {
    let spec: MeasureSpec = serde_json::from_str(text).map_err(|e| Error::InvalidMeasure(e.to_string()))?;
    spec.to_measure()
}

/// Pretty JSON encoding with metadata.
pub fn to_json(m: &Measure) -> String {
    serde_json::to_string_pretty(&MeasureSpec::from_measure(m)).expect("measure spec serializes")
}

/// Loads a measure from a `builtin:` shorthand or a JSON file path.
pub fn load(source: &str) -> Result<Measure> {
    if source.starts_with("builtin:") {
        let b = parse_uri(source)?;
        let params: Vec<(&str, f64)> = b.params.iter().map(|(k, v)| (k.as_str(), *v)).collect();
        return builtin_law(&b.name, &params);
    }
    let text = std::fs::read_to_string(source).map_err(|e| Error::InvalidParams(format!("{source}: {e}")))?;
    from_json(&text)
}

/// Interpolation points of an explicit panel, for writing `values` by hand.
pub fn panel_points(a: f64, b: f64, map: PanelMap, n: usize) -> Vec<f64> {
    cheb_nodes(a, b, map, n)
}

impl Measure {
    /// Multiplies every mass by `s` (used to absorb tiny normalization errors).
    pub(crate) fn scaled(&self, s: f64) -> Measure {
        let atoms = self.atoms.iter().map(|a| (a.0, a.1 * s)).collect();
        let panels = self
            .panels
            .iter()
            .map(|p| {
                let q = p.clone();
                match &p.density {
                    super::Density::Cheb(_) => {
                        let n = q.cheb_len().unwrap_or(32);
                        let vals: Vec<f64> = q.sample_values(n).into_iter().map(|v| v * s).collect();
                        Panel::cheb_from_samples(p.a, p.b, p.map, &vals)
                    }
                    super::Density::Func(_) => Panel::func(p.a, p.b, p.map, move |x| s * q.density_at(x)),
                }
            })
            .collect();
        let tail = self.tail.map(|t| Tail { c: t.c * s, ..t });
        Measure::new_unchecked(atoms, panels, tail, self.kind)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::measure::levy_distance;

    #[test]
    fn uri_shorthand() {
        let b = parse_uri("builtin:free_beta_prime(2,1)").unwrap();
        assert_eq!(b.name, "free_beta_prime");
        assert_eq!(b.params["a"], 2.0);
        assert_eq!(b.params["b"], 1.0);
        let b = parse_uri("builtin:mp(lambda=0.5)").unwrap();
        assert_eq!(b.params["lambda"], 0.5);
        assert!(parse_uri("builtin:mp(1,2").is_err());
        assert!(load("builtin:inverse_mp").is_ok());
    }

    #[test]
    fn builtin_round_trip() {
        let m = load("builtin:free_beta_prime(2,3)").unwrap();
        let text = to_json(&m);
        assert!(text.contains("metadata"));
        let r = from_json(&text).unwrap();
        assert_eq!(r.builtin(), m.builtin());
    }

    #[test]
    fn explicit_round_trip() {
        let src = load("builtin:free_beta_prime(2,3)").unwrap();
        let m = Measure::new_unchecked(vec![], src.panels().to_vec(), None, SupportKind::Nonnegative);
        let text = to_json(&m);
        let r = from_json(&text).unwrap();
        r.validate().unwrap();
        assert!(levy_distance(&r, &src) < 1e-9);
        for x in [0.1, 1.0, 3.0] {
            assert!((r.density(x) - src.density(x)).abs() < 1e-9);
        }
    }

    #[test]
    fn heavy_tail_round_trip() {
        let src = load("builtin:inverse_mp").unwrap();
        let m = Measure::new_unchecked(vec![], src.panels().to_vec(), src.tail(), SupportKind::Nonnegative);
        let r = from_json(&to_json(&m)).unwrap();
        assert!((r.tail_mass(1e6) - src.tail_mass(1e6)).abs() < 1e-9);
        assert!(levy_distance(&r, &src) < 1e-7);
    }

    #[test]
    fn atoms_only_document() {
        let m = from_json(r#"{"atoms": [[0, 0.25], [2, 0.75]]}"#).unwrap();
        assert_eq!(m.atoms(), &[(0.0, 0.25), (2.0, 0.75)]);
        assert!(from_json(r#"{"atoms": [[0, 0.5]]}"#).is_err());
    }
}
