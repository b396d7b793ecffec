//! Plain-text formats. `#` starts a comment; blank lines are ignored.
//!
//! - complex: `simplex v0 v1 ...` per line, closed under faces on load
//! - set: `simplex v0 v1 ...` per member
//! - map: `v -> w`, every source vertex exactly once
//! - step function: `coeff : path-to-set-file`
//! - value function: `simplex v0 ... : a+b√2`, or `default : value`

use std::collections::BTreeMap;
use std::sync::Arc;

use num_bigint::BigInt;

use crate::algebra::QuadExt;
use crate::complex::{Complex, Simplex, SimplexSet, VertexId};
use crate::error::{Error, Result};
use crate::integral::StepFunction;
use crate::maps::SimplicialMap;
use crate::riemann::ValueFunction;

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Non-empty, comment-stripped lines with 1-based numbers.
fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines().enumerate().filter_map(|(i, l)| {
        let l = l.split('#').next().unwrap_or("").trim();
        (!l.is_empty()).then_some((i + 1, l))
    })
}

fn parse_vertex(line: usize, tok: &str) -> Result<VertexId> {
    tok.parse::<u32>()
        .map(VertexId)
        .map_err(|_| parse_err(line, format!("invalid vertex id `{tok}`")))
}

fn parse_simplex(line: usize, body: &str) -> Result<Simplex> {
    let mut toks = body.split_whitespace();
    if toks.next() != Some("simplex") {
        return Err(parse_err(line, "expected `simplex v0 v1 ...`"));
    }
    let verts = toks.map(|t| parse_vertex(line, t)).collect::<Result<Vec<_>>>()?;
    let n = verts.len();
    let s = Simplex::new(verts).map_err(|_| parse_err(line, "simplex needs at least one vertex"))?;
    if s.vertices().len() != n {
        return Err(parse_err(line, "repeated vertex in simplex"));
    }
    Ok(s)
}

fn simplex_line(s: &Simplex) -> String {
    let ids: Vec<String> = s.vertices().iter().map(|v| v.0.to_string()).collect();
    format!("simplex {}", ids.join(" "))
}

pub fn parse_complex(text: &str) -> Result<Complex> {
    let simplices = lines(text)
        .map(|(n, l)| parse_simplex(n, l))
        .collect::<Result<Vec<_>>>()?;
    Ok(Complex::from_simplices(simplices))
}

/// Maximal simplices only; reparses to an equal complex.
pub fn write_complex(x: &Complex) -> String {
    x.maximal_simplices().map(|s| simplex_line(s) + "\n").collect()
}

pub fn parse_set(text: &str, ambient: &Arc<Complex>) -> Result<SimplexSet> {
    let mut members = Vec::new();
    for (n, l) in lines(text) {
        let s = parse_simplex(n, l)?;
        if !ambient.contains(&s) {
            return Err(parse_err(n, format!("{s} is not a simplex of the complex")));
        }
        members.push(s);
    }
    SimplexSet::new(ambient, members)
}

pub fn write_set(a: &SimplexSet) -> String {
    a.simplices().map(|s| simplex_line(s) + "\n").collect()
}

pub fn parse_map(text: &str, source: &Arc<Complex>, target: &Arc<Complex>) -> Result<SimplicialMap> {
    let mut assignment = BTreeMap::new();
    for (n, l) in lines(text) {
        let (v, w) = l.split_once("->").ok_or_else(|| parse_err(n, "expected `v -> w`"))?;
        let (v, w) = (parse_vertex(n, v.trim())?, parse_vertex(n, w.trim())?);
        if !source.has_vertex(v) {
            return Err(parse_err(n, format!("{v} is not a vertex of the source")));
        }
        if !target.has_vertex(w) {
            return Err(parse_err(n, format!("{w} is not a vertex of the target")));
        }
        if assignment.insert(v, w).is_some() {
            return Err(parse_err(n, format!("vertex {v} assigned twice")));
        }
    }
    SimplicialMap::new(Arc::clone(source), Arc::clone(target), assignment)
}

pub fn write_map(f: &SimplicialMap) -> String {
    f.assignment().iter().map(|(v, w)| format!("{v} -> {w}\n")).collect()
}

/// Parses `coeff : path` lines, resolving each path with `load`. Returns the
/// function and the paths in term order.
pub fn parse_step_function(
    text: &str,
    ambient: &Arc<Complex>,
    mut load: impl FnMut(&str) -> Result<SimplexSet>,
) -> Result<(StepFunction, Vec<String>)> {
    let mut h = StepFunction::zero(ambient);
    let mut paths = Vec::new();
    for (n, l) in lines(text) {
        let (c, p) = l
            .split_once(':')
            .ok_or_else(|| parse_err(n, "expected `coeff : set-file`"))?;
        let c: BigInt = c
            .trim()
            .parse()
            .map_err(|_| parse_err(n, format!("invalid coefficient `{}`", c.trim())))?;
        let p = p.trim();
        let set = load(p).map_err(|e| parse_err(n, format!("{p}: {e}")))?;
        h.push(c, set)?;
        paths.push(p.to_string());
    }
    Ok((h, paths))
}

pub fn write_step_function(terms: &[(BigInt, String)]) -> String {
    terms.iter().map(|(c, p)| format!("{c} : {p}\n")).collect()
}

/// Accepts `√2` or `sqrt2`, with or without a rational part.
pub fn parse_quad(s: &str) -> Result<QuadExt> {
    let s = s.trim().replace("sqrt2", "√2").replace(' ', "");
    let Some(body) = s.strip_suffix("√2") else {
        return s.parse();
    };
    let split = body
        .char_indices()
        .skip(1)
        .filter(|(_, c)| *c == '+' || *c == '-')
        .map(|(i, _)| i)
        .last();
    let (a, b) = match split {
        Some(i) => (&body[..i], &body[i..]),
        None => ("0", body),
    };
    let b = match b {
        "" | "+" => "1",
        "-" => "-1",
        b => b.strip_prefix('+').unwrap_or(b),
    };
    let rational = |t: &str| t.parse::<QuadExt>().map(|q| q.a);
    Ok(QuadExt::new(rational(a)?, rational(b)?))
}

pub fn parse_value_function(text: &str, ambient: &Arc<Complex>) -> Result<ValueFunction> {
    let mut default = None;
    let mut values: Vec<Option<QuadExt>> = vec![None; ambient.len()];
    for (n, l) in lines(text) {
        let (lhs, rhs) = l
            .rsplit_once(':')
            .ok_or_else(|| parse_err(n, "expected `simplex v0 ... : value`"))?;
        let v = parse_quad(rhs).map_err(|_| parse_err(n, format!("invalid value `{}`", rhs.trim())))?;
        if lhs.trim() == "default" {
            default = Some(v);
            continue;
        }
        let s = parse_simplex(n, lhs)?;
        let i = ambient
            .index_of(&s)
            .ok_or_else(|| parse_err(n, format!("{s} is not a simplex of the complex")))?;
        if values[i].replace(v).is_some() {
            return Err(parse_err(n, format!("{s} assigned twice")));
        }
    }
    let values = values
        .into_iter()
        .enumerate()
        .map(|(i, v)| {
            v.or_else(|| default.clone())
                .ok_or_else(|| parse_err(0, format!("no value for {}", ambient.simplex(i))))
        })
        .collect::<Result<Vec<_>>>()?;
    ValueFunction::new(ambient, values)
}

/// One line per simplex.
pub fn write_value_function(h: &ValueFunction) -> String {
    h.ambient()
        .simplices()
        .iter()
        .zip(h.values())
        .map(|(s, v)| format!("{} : {v}\n", simplex_line(s)))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog;
    use crate::gen;
    use proptest::prelude::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn parse_examples() {
        let x = parse_complex("# a triangle\nsimplex 0 1 2\n\nsimplex 2 3 # tail\n").unwrap();
        assert_eq!(x.len(), 7 + 2);
        let err = parse_complex("simplex 0 1\nsimplx 2\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 2, .. }));
        let x = Arc::new(x);
        assert!(matches!(parse_map("0 -> 1\n", &x, &x), Err(Error::MissingVertex(_))));
        assert!(matches!(
            parse_set("simplex 0 3\n", &x),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn quad_spellings() {
        assert_eq!(parse_quad("√2").unwrap(), QuadExt::sqrt2());
        assert_eq!(parse_quad("sqrt2").unwrap(), QuadExt::sqrt2());
        assert_eq!(parse_quad("3√2").unwrap(), QuadExt::from_ints(0, 3));
        assert_eq!(parse_quad("-√2").unwrap(), QuadExt::from_ints(0, -1));
        assert_eq!(parse_quad("1+√2").unwrap(), QuadExt::from_ints(1, 1));
        assert_eq!(parse_quad("1/2-3/4√2").unwrap().to_string(), "1/2-3/4√2");
        assert_eq!(parse_quad("-5").unwrap(), QuadExt::from_ints(-5, 0));
    }

    #[test]
    fn value_function_default() {
        let inst = catalog::path_reflection();
        let x = inst.complex();
        let h = parse_value_function("default : 0\nsimplex 1 : √2\nsimplex 0 1 : √2\nsimplex 1 2 : √2\n", x).unwrap();
        assert_eq!(Some(h), inst.values);
        assert!(parse_value_function("simplex 1 : √2\n", x).is_err());
    }

    proptest! {
        #[test]
        fn round_trips(seed in any::<u64>()) {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let x = Arc::new(gen::random_complex(&mut rng, 7, 3, 40));
            let y = parse_complex(&write_complex(&x)).unwrap();
            prop_assert_eq!(&y, x.as_ref());
            let f = gen::random_self_map(&mut rng, &x);
            prop_assert_eq!(parse_map(&write_map(&f), &x, &x).unwrap(), f.clone());
            let a = gen::random_set(&mut rng, &x);
            prop_assert_eq!(parse_set(&write_set(&a), &x).unwrap(), a);
            let h = gen::random_value_function(&mut rng, &f);
            prop_assert_eq!(parse_value_function(&write_value_function(&h), &x).unwrap(), h);
        }
    }
}
