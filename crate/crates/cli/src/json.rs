//! JSON encodings of the library types.
//!
//! Rationals are strings `"p/q"` (or `"p"`), matrices are row-major arrays,
//! Weyl group elements are words in 1-based simple reflection indices, and
//! points and arrows are records tagged with `kind`, `rank` and `n`.
//! Decoding re-canonicalizes and rejects records that are not in canonical form.

use std::str::FromStr;

use flagoid::cells::{canonicalize_fn, FnPoint};
use flagoid::groupcore::{rat_to_string, QMat, Rat, TorusElt};
use flagoid::groupoids::{C2nArrow, FoTArrow, GammaArrow, GdbuArrow};
use flagoid::rootdata::WeylElt;
use serde_json::{json, Map, Value};

/// Malformed or non-canonical input.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid input: {0}")]
pub struct JsonError(pub String);

pub type JResult<T> = std::result::Result<T, JsonError>;

fn bad<T>(msg: impl Into<String>) -> JResult<T> {
    Err(JsonError(msg.into()))
}

impl From<flagoid::Error> for JsonError {
    fn from(e: flagoid::Error) -> Self {
        JsonError(e.to_string())
    }
}

pub fn rat(r: &Rat) -> Value {
    Value::String(rat_to_string(r))
}

pub fn parse_rat(v: &Value) -> JResult<Rat> {
    match v {
        Value::String(s) => Rat::from_str(s.trim()).map_err(|_| JsonError(format!("not a rational: {s:?}"))),
        Value::Number(n) if n.is_i64() => Ok(Rat::from_integer(n.as_i64().expect("checked").into())),
        _ => bad(format!("not a rational: {v}")),
    }
}

pub fn rats(xs: &[Rat]) -> Value {
    Value::Array(xs.iter().map(rat).collect())
}

pub fn parse_rats(v: &Value) -> JResult<Vec<Rat>> {
    array(v)?.iter().map(parse_rat).collect()
}

pub fn matrix(m: &QMat) -> Value {
    Value::Array(m.rows().iter().map(|r| rats(r)).collect())
}

pub fn parse_matrix(v: &Value) -> JResult<QMat> {
    let rows: Vec<Vec<Rat>> = array(v)?.iter().map(parse_rats).collect::<JResult<_>>()?;
    let n = rows.len();
    if n < 2 || rows.iter().any(|r| r.len() != n) {
        return bad("matrix must be square of size at least 2");
    }
    Ok(QMat::from_rows(rows)?)
}

pub fn matrices(ms: &[QMat]) -> Value {
    Value::Array(ms.iter().map(matrix).collect())
}

pub fn parse_matrices(v: &Value) -> JResult<Vec<QMat>> {
    array(v)?.iter().map(parse_matrix).collect()
}

pub fn weyl(w: &WeylElt) -> Value {
    Value::Array(w.word().iter().map(|i| json!(i + 1)).collect())
}

pub fn parse_weyl(rank: usize, v: &Value) -> JResult<WeylElt> {
    let word = array(v)?
        .iter()
        .map(|x| match x.as_u64() {
            Some(i) if i >= 1 && (i as usize) <= rank => Ok(i as usize - 1),
            _ => bad(format!("simple reflection index out of range 1..={rank}: {x}")),
        })
        .collect::<JResult<Vec<usize>>>()?;
    Ok(WeylElt::from_word(rank, &word)?)
}

pub fn weyls(ws: &[WeylElt]) -> Value {
    Value::Array(ws.iter().map(weyl).collect())
}

pub fn parse_weyls(rank: usize, v: &Value) -> JResult<Vec<WeylElt>> {
    array(v)?.iter().map(|x| parse_weyl(rank, x)).collect()
}

pub fn torus(t: &TorusElt) -> Value {
    rats(&t.tau)
}

pub fn parse_torus(v: &Value) -> JResult<TorusElt> {
    Ok(TorusElt::new(parse_rats(v)?)?)
}

pub fn array(v: &Value) -> JResult<&Vec<Value>> {
    v.as_array().ok_or_else(|| JsonError(format!("expected an array, got {v}")))
}

pub fn field<'a>(v: &'a Value, key: &str) -> JResult<&'a Value> {
    v.get(key).ok_or_else(|| JsonError(format!("missing field {key:?}")))
}

fn kind(v: &Value) -> JResult<&str> {
    field(v, "kind")?.as_str().ok_or_else(|| JsonError("kind must be a string".into()))
}

fn expect_kind(v: &Value, want: &str) -> JResult<()> {
    let k = kind(v)?;
    if k != want {
        return bad(format!("expected kind {want:?}, got {k:?}"));
    }
    Ok(())
}

fn record(kind: &str, rank: usize, n: usize, fields: Vec<(&str, Value)>) -> Value {
    let mut m = Map::new();
    m.insert("kind".into(), json!(kind));
    m.insert("rank".into(), json!(rank));
    m.insert("n".into(), json!(n));
    for (k, v) in fields {
        m.insert(k.into(), v);
    }
    Value::Object(m)
}

fn rank_of(v: &Value) -> JResult<usize> {
    match field(v, "rank")?.as_u64() {
        Some(r) if r >= 1 => Ok(r as usize),
        _ => bad("rank must be a positive integer"),
    }
}

fn check_sizes(ms: &[QMat], rank: usize) -> JResult<()> {
    if ms.iter().any(|m| m.size() != rank + 1) {
        return bad(format!("matrices must be {0}x{0} for rank {rank}", rank + 1));
    }
    Ok(())
}

/// Either explicit representatives `reps` or the canonical components.
fn reps_or(v: &Value, rank: usize, canonical: impl FnOnce() -> JResult<Vec<QMat>>) -> JResult<(Vec<QMat>, bool)> {
    let ms = match v.get("reps") {
        Some(r) => (parse_matrices(r)?, false),
        None => (canonical()?, true),
    };
    check_sizes(&ms.0, rank)?;
    if ms.0.is_empty() {
        return bad("a point needs at least one matrix");
    }
    Ok(ms)
}

pub fn fn_point(p: &FnPoint) -> Value {
    record("flags", p.rank(), p.arity(), vec![("cell", weyls(&p.w)), ("c", matrices(&p.c))])
}

pub fn parse_fn_point(v: &Value) -> JResult<FnPoint> {
    expect_kind(v, "flags")?;
    let rank = rank_of(v)?;
    let (ms, canonical) = reps_or(v, rank, || parse_matrices(field(v, "c")?))?;
    let p = canonicalize_fn(&ms);
    if canonical && p.c != ms {
        return bad("flags record is not in canonical form");
    }
    Ok(p)
}

pub fn gamma(g: &GammaArrow) -> Value {
    record(
        "gamma",
        g.size() - 1,
        g.half(),
        vec![("cell", weyls(g.cell())), ("c", matrices(&g.inner.c)), ("b", matrix(&g.inner.b)), ("bm", matrix(&g.bm))],
    )
}

pub fn parse_gamma(v: &Value) -> JResult<GammaArrow> {
    expect_kind(v, "gamma")?;
    let rank = rank_of(v)?;
    let (ms, canonical) = reps_or(v, rank, || {
        let mut c = parse_matrices(field(v, "c")?)?;
        let b = parse_matrix(field(v, "b")?)?;
        match c.last_mut() {
            Some(last) => *last = last.mul(&b),
            None => return bad("c must be nonempty"),
        }
        Ok(c)
    })?;
    if ms.len() % 2 != 0 {
        return bad("arrows have even arity 2n");
    }
    let g = GammaArrow::from_reps(&ms)?;
    if canonical && gamma(&g) != strip_reps(v) {
        return bad("gamma record is not in canonical form");
    }
    Ok(g)
}

fn strip_reps(v: &Value) -> Value {
    let mut v = v.clone();
    if let Some(m) = v.as_object_mut() {
        m.remove("reps");
    }
    v
}

pub fn c2n(a: &C2nArrow) -> Value {
    let rank = a.bm.size() - 1;
    record(
        "c2n",
        rank,
        a.half(),
        vec![("flags", Value::Array(a.flags.iter().map(fn_point).collect())), ("bm", matrix(&a.bm))],
    )
}

pub fn parse_c2n(v: &Value) -> JResult<C2nArrow> {
    expect_kind(v, "c2n")?;
    let rank = rank_of(v)?;
    let flags = array(field(v, "flags")?)?.iter().map(parse_fn_point).collect::<JResult<Vec<_>>>()?;
    let bm = parse_matrix(field(v, "bm")?)?;
    check_sizes(std::slice::from_ref(&bm), rank)?;
    let a = C2nArrow { flags, bm };
    // validate through the Gamma model, which rejects inconsistent data
    let g = flagoid::groupoids::from_c2n(&a)?;
    if flagoid::groupoids::to_c2n(&g) != a {
        return bad("c2n record is not a valid arrow");
    }
    Ok(a)
}

pub fn fot(a: &FoTArrow) -> Value {
    record("fot", a.p.rank(), a.p.arity(), vec![("cell", weyls(&a.p.w)), ("c", matrices(&a.p.c)), ("t", torus(&a.t))])
}

pub fn parse_fot(v: &Value) -> JResult<FoTArrow> {
    expect_kind(v, "fot")?;
    let rank = rank_of(v)?;
    let (ms, canonical) = reps_or(v, rank, || parse_matrices(field(v, "c")?))?;
    let p = canonicalize_fn(&ms);
    if canonical && p.c != ms {
        return bad("fot record is not in canonical form");
    }
    let t = parse_torus(field(v, "t")?)?;
    if t.rank() != rank {
        return bad("torus element has the wrong rank");
    }
    Ok(FoTArrow { p, t })
}

pub fn gdbu(u: &[WeylElt], a: &GdbuArrow) -> Value {
    record(
        "gdbu",
        u[0].rank(),
        a.c.len(),
        vec![
            ("u", weyls(u)),
            ("c", matrices(&a.c)),
            ("b", matrix(&a.b)),
            ("bm", matrix(&a.bm)),
            ("c2", matrices(&a.c2)),
        ],
    )
}

pub fn parse_gdbu(v: &Value) -> JResult<(Vec<WeylElt>, GdbuArrow)> {
    expect_kind(v, "gdbu")?;
    let rank = rank_of(v)?;
    let u = parse_weyls(rank, field(v, "u")?)?;
    if u.is_empty() {
        return bad("u must be nonempty");
    }
    let a = GdbuArrow {
        c: parse_matrices(field(v, "c")?)?,
        b: parse_matrix(field(v, "b")?)?,
        bm: parse_matrix(field(v, "bm")?)?,
        c2: parse_matrices(field(v, "c2")?)?,
    };
    check_sizes(&a.c, rank)?;
    check_sizes(&a.c2, rank)?;
    flagoid::groupoids::Gdbu::new(flagoid::groupoids::Reps::bar(&u)).check(&a)?;
    Ok((u, a))
}

#[cfg(test)]
mod tests {
    use super::*;
    use flagoid::groupcore::frac;

    #[test]
    fn rationals() {
        assert_eq!(rat(&frac(-3, 6)), json!("-1/2"));
        assert_eq!(rat(&frac(4, 1)), json!("4"));
        assert_eq!(parse_rat(&json!("6/-4")).unwrap(), frac(-3, 2));
        assert_eq!(parse_rat(&json!(7)).unwrap(), frac(7, 1));
        assert!(parse_rat(&json!("1/0")).is_err());
        assert!(parse_rat(&json!(0.5)).is_err());
    }

    #[test]
    fn weyl_words_are_one_based() {
        let w = WeylElt::from_word(2, &[0, 1]).unwrap();
        assert_eq!(weyl(&w), json!([1, 2]));
        assert_eq!(parse_weyl(2, &json!([1, 2])).unwrap(), w);
        assert!(parse_weyl(2, &json!([3])).is_err());
    }

    #[test]
    fn non_canonical_records_are_rejected() {
        let p = canonicalize_fn(&[QMat::from_i64(&[&[2, 1], &[1, 1]])]);
        let mut v = fn_point(&p);
        assert_eq!(parse_fn_point(&v).unwrap(), p);
        v["c"] = json!([[["2", "1"], ["1", "1"]]]);
        assert!(parse_fn_point(&v).is_err());
    }
}
