//! Space and surface descriptor strings.
//!
//! ```text
//! berger kappa=<f> tau=<f>
//! heisenberg tau=<f>
//! product base=(sphere r=<f> | capped l=<f> blend=<f> [eps=<f>]) fiber=(line | circle period=<f>)
//!
//! equator theta=<f>
//! heis-plane a=<f> b=<f> c=<f> d=<f>
//! vertical-plane dir=<f> [offset=<f>]
//! custom mesh=<path>
//! ```

use convexa_core::spaces::{
    AmbientSpace, BergerSphere, CappedProfile, Fiber, Heisenberg, ProductSpace, Surface2D,
};
use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SpecError(pub String);

impl fmt::Display for SpecError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for SpecError {}

fn err<T>(msg: impl Into<String>) -> Result<T, SpecError> {
    Err(SpecError(msg.into()))
}

/// A head word followed by `key=value` pairs; values may be parenthesized groups.
#[derive(Debug, Clone, PartialEq)]
struct Term {
    head: String,
    args: BTreeMap<String, String>,
}

fn split_top(s: &str) -> Result<Vec<String>, SpecError> {
    let mut out = Vec::new();
    let mut cur = String::new();
    let mut depth = 0i32;
    for ch in s.chars() {
        match ch {
            '(' => {
                depth += 1;
                cur.push(ch);
            }
            ')' => {
                depth -= 1;
                if depth < 0 {
                    return err(format!("unbalanced ')' in `{s}`"));
                }
                cur.push(ch);
            }
            c if c.is_whitespace() && depth == 0 => {
                if !cur.is_empty() {
                    out.push(std::mem::take(&mut cur));
                }
            }
            c => cur.push(c),
        }
    }
    if depth != 0 {
        return err(format!("unbalanced '(' in `{s}`"));
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    Ok(out)
}

fn parse_term(s: &str) -> Result<Term, SpecError> {
    let tokens = split_top(s.trim())?;
    let Some((head, rest)) = tokens.split_first() else {
        return err("empty descriptor");
    };
    if head.contains('=') {
        return err(format!("descriptor must start with a kind, got `{head}`"));
    }
    let mut args = BTreeMap::new();
    for tok in rest {
        let Some((k, v)) = tok.split_once('=') else {
            return err(format!("expected key=value, got `{tok}`"));
        };
        let v = v
            .strip_prefix('(')
            .and_then(|v| v.strip_suffix(')'))
            .unwrap_or(v);
        if args.insert(k.to_string(), v.to_string()).is_some() {
            return err(format!("duplicate key `{k}`"));
        }
    }
    Ok(Term {
        head: head.to_string(),
        args,
    })
}

impl Term {
    fn expect_keys(&self, required: &[&str], optional: &[&str]) -> Result<(), SpecError> {
        for k in required {
            if !self.args.contains_key(*k) {
                return err(format!("`{}` needs `{k}=`", self.head));
            }
        }
        for k in self.args.keys() {
            if !required.contains(&k.as_str()) && !optional.contains(&k.as_str()) {
                return err(format!("`{}` does not take `{k}=`", self.head));
            }
        }
        Ok(())
    }

    fn num(&self, key: &str) -> Result<f64, SpecError> {
        let raw = &self.args[key];
        match raw.parse::<f64>() {
            Ok(v) if v.is_finite() => Ok(v),
            _ => err(format!("`{key}={raw}` is not a finite number")),
        }
    }

    fn opt_num(&self, key: &str) -> Result<Option<f64>, SpecError> {
        self.args
            .contains_key(key)
            .then(|| self.num(key))
            .transpose()
    }
}

fn core_err(e: convexa_core::error::GeomError) -> SpecError {
    SpecError(e.to_string())
}

pub fn parse_space(s: &str) -> Result<AmbientSpace, SpecError> {
    let t = parse_term(s)?;
    match t.head.as_str() {
        "berger" => {
            t.expect_keys(&["kappa", "tau"], &[])?;
            BergerSphere::new(t.num("kappa")?, t.num("tau")?)
                .map(AmbientSpace::Berger)
                .map_err(core_err)
        }
        "heisenberg" => {
            t.expect_keys(&["tau"], &[])?;
            Heisenberg::new(t.num("tau")?)
                .map(AmbientSpace::Heisenberg)
                .map_err(core_err)
        }
        "product" => {
            t.expect_keys(&["base", "fiber"], &[])?;
            let base = parse_base(&t.args["base"])?;
            let fiber = parse_fiber(&t.args["fiber"])?;
            ProductSpace::new(base, fiber)
                .map(AmbientSpace::Product)
                .map_err(core_err)
        }
        other => err(format!(
            "unknown space `{other}` (expected berger, heisenberg or product)"
        )),
    }
}

pub fn parse_base(s: &str) -> Result<Surface2D, SpecError> {
    let t = parse_term(s)?;
    match t.head.as_str() {
        "sphere" => {
            t.expect_keys(&["r"], &[])?;
            Surface2D::round_sphere(t.num("r")?).map_err(core_err)
        }
        "capped" => {
            t.expect_keys(&["l", "blend"], &["eps"])?;
            let profile = match t.opt_num("eps")? {
                Some(eps) => {
                    CappedProfile::with_cylinder_curvature(t.num("l")?, t.num("blend")?, eps)
                }
                None => CappedProfile::new(t.num("l")?, t.num("blend")?),
            };
            profile.map(Surface2D::CappedCylinder).map_err(core_err)
        }
        other => err(format!(
            "unknown base `{other}` (expected sphere or capped)"
        )),
    }
}

fn parse_fiber(s: &str) -> Result<Fiber, SpecError> {
    let t = parse_term(s)?;
    match t.head.as_str() {
        "line" => {
            t.expect_keys(&[], &[])?;
            Ok(Fiber::Line)
        }
        "circle" => {
            t.expect_keys(&["period"], &[])?;
            Ok(Fiber::Circle {
                period: t.num("period")?,
            })
        }
        other => err(format!("unknown fiber `{other}` (expected line or circle)")),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum SurfaceSpec {
    Equator { theta: f64 },
    HeisPlane { a: f64, b: f64, c: f64, d: f64 },
    VerticalPlane { dir: f64, offset: f64 },
    Custom { mesh: PathBuf },
}

pub fn parse_surface(s: &str) -> Result<SurfaceSpec, SpecError> {
    let t = parse_term(s)?;
    match t.head.as_str() {
        "equator" => {
            t.expect_keys(&["theta"], &[])?;
            Ok(SurfaceSpec::Equator {
                theta: t.num("theta")?,
            })
        }
        "heis-plane" => {
            t.expect_keys(&["a", "b", "c", "d"], &[])?;
            let (a, b, c) = (t.num("a")?, t.num("b")?, t.num("c")?);
            if a == 0.0 && b == 0.0 && c == 0.0 {
                return err("heis-plane needs a nonzero normal (a, b, c)");
            }
            Ok(SurfaceSpec::HeisPlane {
                a,
                b,
                c,
                d: t.num("d")?,
            })
        }
        "vertical-plane" => {
            t.expect_keys(&["dir"], &["offset"])?;
            Ok(SurfaceSpec::VerticalPlane {
                dir: t.num("dir")?,
                offset: t.opt_num("offset")?.unwrap_or(0.0),
            })
        }
        "custom" => {
            t.expect_keys(&["mesh"], &[])?;
            Ok(SurfaceSpec::Custom {
                mesh: PathBuf::from(&t.args["mesh"]),
            })
        }
        other => err(format!(
            "unknown surface `{other}` (expected equator, heis-plane, vertical-plane or custom)"
        )),
    }
}

/// Chart periods a mesh inherits from its ambient space.
pub fn space_periods(space: &AmbientSpace) -> [Option<f64>; 3] {
    match space {
        AmbientSpace::Product(p) => p.periods(),
        _ => [None; 3],
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn spaces() {
        let AmbientSpace::Berger(b) = parse_space("berger kappa=4 tau=0.5").unwrap() else {
            panic!()
        };
        assert_eq!((b.kappa(), b.tau()), (4.0, 0.5));
        assert!(matches!(
            parse_space("heisenberg tau=-0.3"),
            Ok(AmbientSpace::Heisenberg(_))
        ));
        let AmbientSpace::Product(p) =
            parse_space("product base=(sphere r=1) fiber=(circle period=2.5)").unwrap()
        else {
            panic!()
        };
        assert_eq!(p.fiber, Fiber::Circle { period: 2.5 });
        assert!(parse_space("product base=(capped l=10 blend=1) fiber=(line)").is_ok());
        assert!(parse_space("product base=(capped l=10 blend=1 eps=0.01) fiber=line").is_ok());
    }

    #[test]
    fn malformed_spaces() {
        for bad in [
            "",
            "berger kappa=-1 tau=0.5",
            "berger kappa=4",
            "berger kappa=4 tau=0.5 tau=1",
            "berger kappa=4 tau=nan",
            "heisenberg tau=0.5 kappa=1",
            "product base=(sphere r=1 fiber=(line)",
            "product base=(torus) fiber=(line)",
            "hyperbolic",
            "kappa=4",
        ] {
            assert!(parse_space(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn surfaces() {
        assert_eq!(
            parse_surface("heis-plane a=1 b=1 c=1 d=1").unwrap(),
            SurfaceSpec::HeisPlane {
                a: 1.0,
                b: 1.0,
                c: 1.0,
                d: 1.0
            }
        );
        assert_eq!(
            parse_surface("vertical-plane dir=0.5").unwrap(),
            SurfaceSpec::VerticalPlane {
                dir: 0.5,
                offset: 0.0
            }
        );
        assert!(matches!(
            parse_surface("custom mesh=a/b.off"),
            Ok(SurfaceSpec::Custom { .. })
        ));
        assert!(parse_surface("heis-plane a=0 b=0 c=0 d=1").is_err());
        assert!(parse_surface("equator").is_err());
    }
}
