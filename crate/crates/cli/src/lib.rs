//! Command-line workbench: factorizations, chart conversion, groupoid
//! arithmetic in four models, leaf classification and the verification suites.
//!
//! Every command prints one JSON value on stdout (and to `--json-out` when
//! given). Exit codes: 0 ok, 1 suite failure, 2 factorization or input
//! domain error, 3 arrows not composable, 4 leaf-domain error.

pub mod json;

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use flagoid::cells::{bs_coords, bs_param, invert_lusztig, lusztig_chart, phis, BSChart, FnPoint};
use flagoid::groupcore::{check_sl, factor_neg, factor_pos, gauss, Rat};
use flagoid::groupoids::{
    self as gp, from_c2n, j_inv, j_map, to_c2n, C2nArrow, FoTArrow, GammaArrow, Gdbu, GdbuArrow, Reps,
};
use flagoid::leaves::{self, TLeaf};
use flagoid::rootdata::WeylElt;
use flagoid::sample::Sampler;
use flagoid::verify::{self, Config, Report, Suite};
use flagoid::Error;

use json::JsonError;

pub const EXIT_OK: i32 = 0;
pub const EXIT_SUITE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_COMPOSE: i32 = 3;
pub const EXIT_LEAF: i32 = 4;

/// Largest rank accepted by the non-verification commands.
pub const MAX_RANK: usize = 4;

#[derive(Parser, Debug)]
#[command(name = "flagoid", version, about = "Exact computations with configuration Poisson groupoids of flags")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub common: Common,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// rank r of SL(r+1)
    #[arg(long, global = true, default_value_t = 1)]
    pub rank: usize,
    /// number of factors n
    #[arg(long, global = true, default_value_t = 1)]
    pub n: usize,
    #[arg(long, global = true, default_value_t = 20)]
    pub samples: usize,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Model::Gamma)]
    pub model: Model,
    /// read the input value from FILE ("-" for stdin)
    #[arg(long, global = true, value_name = "FILE")]
    pub json_in: Option<PathBuf>,
    /// also write the output value to FILE
    #[arg(long, global = true, value_name = "FILE")]
    pub json_out: Option<PathBuf>,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Model {
    Gamma,
    C2n,
    Fot,
    Gdbu,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum FactorMode {
    Gauss,
    #[value(name = "bruhat+")]
    BruhatPos,
    #[value(name = "bruhat-")]
    BruhatNeg,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum GroupoidOp {
    Source,
    Target,
    Unit,
    Inverse,
    Mul,
    /// a random composable pair in the chosen model
    Sample,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum LeafOp {
    Classify,
    SameLeaf,
    Dim,
    Fiber,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Gauss or Bruhat factorization of an SL matrix
    Factor {
        #[arg(long, value_enum, default_value_t = FactorMode::Gauss)]
        mode: FactorMode,
        /// the matrix as JSON, e.g. '[["2","1"],["1","1"]]'
        #[arg(long)]
        matrix: Option<String>,
    },
    /// Bott-Samelson and Lusztig coordinates of a point of F_n, or the point of given coordinates
    Chart {
        /// reduced words of the blocks, e.g. "1,2;2" (1-based, ';' between blocks, 'e' for the identity)
        #[arg(long)]
        words: Option<String>,
        /// Bott-Samelson coordinates, comma separated
        #[arg(long, conflicts_with = "lusztig")]
        bs: Option<String>,
        /// Lusztig parameters, comma separated
        #[arg(long)]
        lusztig: Option<String>,
    },
    /// Structure maps of the groupoid in one of its models
    Groupoid {
        #[arg(value_enum)]
        op: GroupoidOp,
        /// recompute in the Gamma model and compare
        #[arg(long)]
        cross_check: bool,
        /// u for the gdbu model, e.g. "1;2"
        #[arg(long)]
        u: Option<String>,
    },
    /// Leaf classification
    Leaf {
        #[arg(value_enum)]
        op: LeafOp,
        /// w for `dim`, e.g. "1,2;1"
        #[arg(long)]
        words: Option<String>,
        /// v for `dim` of a double Bruhat cell
        #[arg(long)]
        v: Option<String>,
    },
    /// Run a verification suite, or a fixture file with --json-in
    Verify {
        /// groupoid-axioms, models, lusztig, poisson-maps, coisotropy, jacobi, leaves, identities, all, fixture
        suite: String,
    },
}

/// A failed command: exit code and a JSON description.
#[derive(Debug, Clone, PartialEq)]
pub struct Failure {
    pub code: i32,
    pub value: Value,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Failure { code, value: json!({ "error": message.into() }) }
    }

    fn with(code: i32, message: impl Into<String>, extra: Value) -> Self {
        let mut f = Failure::new(code, message);
        if let (Some(m), Value::Object(e)) = (f.value.as_object_mut(), extra) {
            m.extend(e);
        }
        f
    }
}

impl From<JsonError> for Failure {
    fn from(e: JsonError) -> Self {
        Failure::new(EXIT_DOMAIN, e.0)
    }
}

/// Exit code of a library error in a given command context.
fn lib_failure(e: Error, context: i32) -> Failure {
    let code = match (&e, context) {
        (Error::NotComposable, _) => EXIT_COMPOSE,
        (_, EXIT_LEAF) => EXIT_LEAF,
        _ => EXIT_DOMAIN,
    };
    let cert = match &e {
        Error::NotInBigCell { alpha } => json!({ "certificate": { "alpha": alpha + 1, "vanishing_minor": alpha + 1 } }),
        Error::NoRationalSqrt { coord } => json!({ "certificate": { "coordinate": coord + 1 } }),
        Error::OutsideToricChart { indices } => {
            json!({ "certificate": { "phi_zero_at": indices.iter().map(|i| i + 1).collect::<Vec<_>>() } })
        }
        _ => json!({}),
    };
    Failure::with(code, e.to_string(), cert)
}

fn dom(e: Error) -> Failure {
    lib_failure(e, EXIT_DOMAIN)
}

fn leaf(e: Error) -> Failure {
    lib_failure(e, EXIT_LEAF)
}

type CResult = std::result::Result<Value, Failure>;

/// Output value and exit code of a command.
pub struct Outcome {
    pub value: Value,
    pub code: i32,
}

pub fn run(cli: &Cli, input: Option<Value>) -> Outcome {
    let c = &cli.common;
    if c.rank == 0 || c.rank > MAX_RANK {
        return fail(Failure::new(EXIT_DOMAIN, format!("rank must be between 1 and {MAX_RANK}")));
    }
    let res = match &cli.command {
        Command::Factor { mode, matrix } => factor(*mode, matrix.as_deref(), input),
        Command::Chart { words, bs, lusztig } => chart(c, words.as_deref(), bs.as_deref(), lusztig.as_deref(), input),
        Command::Groupoid { op, cross_check, u } => groupoid(c, *op, *cross_check, u.as_deref(), input),
        Command::Leaf { op, words, v } => leaf_cmd(c, *op, words.as_deref(), v.as_deref(), input),
        Command::Verify { suite } => return verify_cmd(c, suite, input),
    };
    match res {
        Ok(value) => Outcome { value, code: EXIT_OK },
        Err(f) => fail(f),
    }
}

fn fail(f: Failure) -> Outcome {
    Outcome { value: f.value, code: f.code }
}

fn need(input: Option<Value>, what: &str) -> std::result::Result<Value, Failure> {
    input.ok_or_else(|| Failure::new(EXIT_DOMAIN, format!("{what} expected via --json-in")))
}

// ---------------------------------------------------------------- factor

fn factor(mode: FactorMode, matrix: Option<&str>, input: Option<Value>) -> CResult {
    let v = match matrix {
        Some(s) => serde_json::from_str(s).map_err(|e| Failure::new(EXIT_DOMAIN, format!("bad matrix: {e}")))?,
        None => need(input, "a matrix")?,
    };
    let g = json::parse_matrix(&v)?;
    check_sl(&g).map_err(dom)?;
    Ok(match mode {
        FactorMode::Gauss => {
            let f = gauss(&g).map_err(dom)?;
            let prod = f.lower_part().mul(&f.u);
            json!({ "kind": "gauss", "l": json::matrix(&f.l), "d": json::rats(&f.d), "u": json::matrix(&f.u), "product": json::matrix(&prod) })
        }
        FactorMode::BruhatPos => {
            let (w, c, b) = factor_pos(&g).map_err(dom)?;
            json!({ "kind": "bruhat+", "w": json::weyl(&w), "c": json::matrix(&c), "b": json::matrix(&b), "product": json::matrix(&c.mul(&b)) })
        }
        FactorMode::BruhatNeg => {
            let (bm, v, c) = factor_neg(&g).map_err(dom)?;
            json!({ "kind": "bruhat-", "bm": json::matrix(&bm), "v": json::weyl(&v), "c": json::matrix(&c), "product": json::matrix(&bm.mul(&c)) })
        }
    })
}

// ---------------------------------------------------------------- chart

/// "1,2;2;e" -> blocks of 0-based letters.
pub fn parse_words(s: &str) -> std::result::Result<Vec<Vec<usize>>, Failure> {
    s.split(';')
        .map(|b| {
            let b = b.trim();
            if b.is_empty() || b == "e" {
                return Ok(vec![]);
            }
            b.split(',')
                .map(|x| match x.trim().parse::<usize>() {
                    Ok(i) if i >= 1 => Ok(i - 1),
                    _ => Err(Failure::new(EXIT_DOMAIN, format!("bad letter {x:?} in {s:?}"))),
                })
                .collect()
        })
        .collect()
}

fn parse_weyl_words(rank: usize, s: &str) -> std::result::Result<Vec<WeylElt>, Failure> {
    parse_words(s)?
        .iter()
        .map(|b| WeylElt::from_word(rank, b).map_err(dom))
        .collect()
}

fn parse_params(s: &str) -> std::result::Result<Vec<Rat>, Failure> {
    s.split(',')
        .filter(|x| !x.trim().is_empty())
        .map(|x| json::parse_rat(&Value::String(x.trim().into())).map_err(Failure::from))
        .collect()
}

fn chart_of(rank: usize, words: &str) -> std::result::Result<BSChart, Failure> {
    let blocks = parse_words(words)?;
    if blocks.iter().flatten().any(|&i| i >= rank) {
        return Err(Failure::new(EXIT_DOMAIN, format!("letters must be at most {rank}")));
    }
    BSChart::from_words(rank, &blocks).map_err(dom)
}

fn chart(c: &Common, words: Option<&str>, bs: Option<&str>, lz: Option<&str>, input: Option<Value>) -> CResult {
    let (ch, p) = match (bs, lz) {
        (Some(z), _) | (_, Some(z)) => {
            let ch = chart_of(c.rank, words.ok_or_else(|| Failure::new(EXIT_DOMAIN, "--words is required"))?)?;
            let z = parse_params(z)?;
            if z.len() != ch.len() {
                return Err(Failure::new(EXIT_DOMAIN, format!("chart has {} coordinates, got {}", ch.len(), z.len())));
            }
            let p = if bs.is_some() { bs_param(&ch, &z) } else { lusztig_chart(&ch, &z).map_err(dom)? };
            (ch, p)
        }
        (None, None) => {
            let p = json::parse_fn_point(&need(input, "a flags record")?)?;
            let ch = match words {
                Some(w) => chart_of(p.rank(), w)?,
                None => BSChart::new(&p.w),
            };
            if ch.w != p.w {
                return Err(Failure::new(EXIT_DOMAIN, "the words do not spell the cell of the point"));
            }
            (ch, p)
        }
    };
    let z = bs_coords(&p, &ch).map_err(dom)?;
    let ph = phis(&ch, &p).map_err(dom)?;
    let eps = invert_lusztig(&ch, &p).ok();
    Ok(json!({
        "point": json::fn_point(&p),
        "words": ch.blocks.iter().map(|b| b.iter().map(|i| i + 1).collect::<Vec<_>>()).collect::<Vec<_>>(),
        "bs": json::rats(&z),
        "phi": json::rats(&ph),
        "lusztig": eps.as_deref().map(json::rats).unwrap_or(Value::Null),
    }))
}

// ---------------------------------------------------------------- groupoid

/// An arrow in one of the models.
#[derive(Clone, Debug, PartialEq)]
pub enum Arrow {
    Gamma(GammaArrow),
    C2n(C2nArrow),
    Fot(FoTArrow),
    Gdbu(Vec<WeylElt>, GdbuArrow),
}

impl Arrow {
    pub fn parse(v: &Value) -> json::JResult<Arrow> {
        match v.get("kind").and_then(Value::as_str) {
            Some("gamma") => Ok(Arrow::Gamma(json::parse_gamma(v)?)),
            Some("c2n") => Ok(Arrow::C2n(json::parse_c2n(v)?)),
            Some("fot") => Ok(Arrow::Fot(json::parse_fot(v)?)),
            Some("gdbu") => {
                let (u, a) = json::parse_gdbu(v)?;
                Ok(Arrow::Gdbu(u, a))
            }
            _ => Err(JsonError(format!("not an arrow record: {v}"))),
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            Arrow::Gamma(g) => json::gamma(g),
            Arrow::C2n(a) => json::c2n(a),
            Arrow::Fot(a) => json::fot(a),
            Arrow::Gdbu(u, a) => json::gdbu(u, a),
        }
    }

    pub fn model(&self) -> Model {
        match self {
            Arrow::Gamma(_) => Model::Gamma,
            Arrow::C2n(_) => Model::C2n,
            Arrow::Fot(_) => Model::Fot,
            Arrow::Gdbu(..) => Model::Gdbu,
        }
    }

    /// Transport to the Gamma model.
    pub fn to_gamma(&self) -> flagoid::Result<GammaArrow> {
        match self {
            Arrow::Gamma(g) => Ok(g.clone()),
            Arrow::C2n(a) => from_c2n(a),
            Arrow::Fot(a) => j_inv(a),
            Arrow::Gdbu(u, a) => Ok(Gdbu::new(Reps::bar(u)).iso_i(a)),
        }
    }

    /// Transport from the Gamma model into `model`.
    pub fn from_gamma(g: &GammaArrow, model: Model, u: Option<&[WeylElt]>) -> flagoid::Result<Arrow> {
        Ok(match model {
            Model::Gamma => Arrow::Gamma(g.clone()),
            Model::C2n => Arrow::C2n(to_c2n(g)),
            Model::Fot => Arrow::Fot(j_map(g)),
            Model::Gdbu => {
                let u = u.ok_or_else(|| Error::DimensionMismatch("gdbu needs u".into()))?;
                Arrow::Gdbu(u.to_vec(), Gdbu::new(Reps::bar(u)).iso_i_inv(g)?)
            }
        })
    }

    fn u(&self) -> Option<&[WeylElt]> {
        match self {
            Arrow::Gdbu(u, _) => Some(u),
            _ => None,
        }
    }

    pub fn source(&self) -> flagoid::Result<Value> {
        Ok(match self {
            Arrow::Gamma(g) => json::fn_point(&g.source()),
            Arrow::C2n(a) => Value::Array(a.source().iter().map(json::fn_point).collect()),
            Arrow::Fot(a) => json::fn_point(&a.source()),
            Arrow::Gdbu(u, a) => json::fn_point(&Gdbu::new(Reps::bar(u)).source(a)),
        })
    }

    pub fn target(&self) -> flagoid::Result<Value> {
        Ok(match self {
            Arrow::Gamma(g) => json::fn_point(&g.target()),
            Arrow::C2n(a) => Value::Array(a.target().iter().map(json::fn_point).collect()),
            Arrow::Fot(a) => json::fn_point(&a.target()?),
            Arrow::Gdbu(u, a) => json::fn_point(&Gdbu::new(Reps::bar(u)).target(a)),
        })
    }

    pub fn inverse(&self) -> flagoid::Result<Arrow> {
        Ok(match self {
            Arrow::Gamma(g) => Arrow::Gamma(g.inverse()),
            Arrow::C2n(a) => Arrow::C2n(a.inverse()),
            Arrow::Fot(a) => Arrow::Fot(a.inverse()?),
            Arrow::Gdbu(u, a) => Arrow::Gdbu(u.clone(), Gdbu::new(Reps::bar(u)).inverse(a)),
        })
    }

    pub fn multiply(&self, o: &Arrow) -> flagoid::Result<Arrow> {
        Ok(match (self, o) {
            (Arrow::Gamma(a), Arrow::Gamma(b)) => Arrow::Gamma(a.multiply(b)?),
            (Arrow::C2n(a), Arrow::C2n(b)) => Arrow::C2n(a.multiply(b)?),
            (Arrow::Fot(a), Arrow::Fot(b)) => Arrow::Fot(a.multiply(b)?),
            (Arrow::Gdbu(u, a), Arrow::Gdbu(u2, b)) if u == u2 => Arrow::Gdbu(u.clone(), Gdbu::new(Reps::bar(u)).multiply(a, b)?),
            _ => return Err(Error::NotComposable),
        })
    }

    pub fn unit(f: &FnPoint, model: Model, u: Option<&[WeylElt]>) -> flagoid::Result<Arrow> {
        Ok(match model {
            Model::Gamma => Arrow::Gamma(GammaArrow::unit(f)),
            Model::C2n => Arrow::C2n(C2nArrow::unit(&gp::flags(f))),
            Model::Fot => Arrow::Fot(FoTArrow::unit(f)),
            Model::Gdbu => {
                let u = u.ok_or_else(|| Error::DimensionMismatch("gdbu needs u".into()))?;
                Arrow::Gdbu(u.to_vec(), Gdbu::new(Reps::bar(u)).unit(f)?)
            }
        })
    }
}

fn parse_arrows(v: &Value, model: Model) -> std::result::Result<Vec<Arrow>, Failure> {
    let items: Vec<&Value> = match v {
        Value::Array(xs) => xs.iter().collect(),
        x => vec![x],
    };
    let arrows = items.into_iter().map(Arrow::parse).collect::<json::JResult<Vec<_>>>()?;
    if let Some(a) = arrows.iter().find(|a| a.model() != model) {
        return Err(Failure::new(EXIT_DOMAIN, format!("arrow of model {:?} given for --model {:?}", a.model(), model)));
    }
    Ok(arrows)
}

/// A random composable pair of arrows in a model.
pub fn sample_pair(s: &mut Sampler, model: Model, rank: usize, n: usize, u: &[WeylElt]) -> flagoid::Result<(Arrow, Arrow)> {
    if model == Model::Gdbu {
        let g = Gdbu::new(Reps::bar(u));
        for _ in 0..200 {
            let p = gp::sample_gmn(s, u, u);
            let Ok(a) = g.cal_j_inv(&p) else { continue };
            let Ok(q) = gp::sample_gmn_from(s, &g.target(&a), u) else { continue };
            let Ok(b) = g.cal_j_inv(&q) else { continue };
            return Ok((Arrow::Gdbu(u.to_vec(), a), Arrow::Gdbu(u.to_vec(), b)));
        }
        return Err(Error::NotInZeroChart { prefix: 1 });
    }
    let a = gp::random_arrow(s, rank + 1, n);
    let b = gp::random_composable(s, &a);
    Ok((Arrow::from_gamma(&a, model, None)?, Arrow::from_gamma(&b, model, None)?))
}

fn groupoid(c: &Common, op: GroupoidOp, cross: bool, u: Option<&str>, input: Option<Value>) -> CResult {
    let u_words = match u {
        Some(w) => Some(parse_weyl_words(c.rank, w)?),
        None if c.model == Model::Gdbu && op != GroupoidOp::Sample && op != GroupoidOp::Unit => None,
        None => Some(vec![WeylElt::simple(c.rank, 0)]),
    };
    if op == GroupoidOp::Sample {
        let mut s = Sampler::new(c.seed);
        let (a, b) = sample_pair(&mut s, c.model, c.rank, c.n, u_words.as_deref().expect("default u")).map_err(dom)?;
        return Ok(json!([a.to_json(), b.to_json()]));
    }
    let v = need(input, "arrows")?;
    if op == GroupoidOp::Unit {
        let f = json::parse_fn_point(&v)?;
        let unit = Arrow::unit(&f, c.model, u_words.as_deref()).map_err(dom)?;
        let mut out = json!({ "result": unit.to_json() });
        if cross {
            let ok = unit.to_gamma().map_err(dom)? == GammaArrow::unit(&f);
            out["cross_check"] = json!(ok);
            if !ok {
                return Err(Failure::with(EXIT_SUITE, "cross-model check failed", out));
            }
        }
        return Ok(out);
    }
    let arrows = parse_arrows(&v, c.model)?;
    let want = if op == GroupoidOp::Mul { 2 } else { 1 };
    if arrows.len() != want {
        return Err(Failure::new(EXIT_DOMAIN, format!("{op:?} takes {want} arrow(s), got {}", arrows.len())));
    }
    let a = &arrows[0];
    let result = match op {
        GroupoidOp::Source => a.source(),
        GroupoidOp::Target => a.target(),
        GroupoidOp::Inverse => a.inverse().map(|x| x.to_json()),
        GroupoidOp::Mul => a.multiply(&arrows[1]).map(|x| x.to_json()),
        _ => unreachable!(),
    }
    .map_err(dom)?;
    let mut out = json!({ "result": result });
    if cross {
        let ga = a.to_gamma().map_err(dom)?;
        let via_gamma = match op {
            GroupoidOp::Source => Arrow::Gamma(ga).source().map(|v| c2n_points(v, a.model())),
            GroupoidOp::Target => Arrow::Gamma(ga).target().map(|v| c2n_points(v, a.model())),
            GroupoidOp::Inverse => Arrow::from_gamma(&ga.inverse(), a.model(), a.u()).map(|x| x.to_json()),
            GroupoidOp::Mul => {
                let gb = arrows[1].to_gamma().map_err(dom)?;
                ga.multiply(&gb).and_then(|p| Arrow::from_gamma(&p, a.model(), a.u())).map(|x| x.to_json())
            }
            _ => unreachable!(),
        }
        .map_err(dom)?;
        let ok = via_gamma == out["result"];
        out["cross_check"] = json!(ok);
        if !ok {
            out["gamma_result"] = via_gamma;
            return Err(Failure::with(EXIT_SUITE, "cross-model check failed", out));
        }
    }
    Ok(out)
}

/// Sources and targets in the C_2n model are lists of single flags.
fn c2n_points(v: Value, model: Model) -> Value {
    if model != Model::C2n {
        return v;
    }
    match json::parse_fn_point(&v) {
        Ok(p) => Value::Array(gp::flags(&p).iter().map(json::fn_point).collect()),
        Err(_) => v,
    }
}

// ---------------------------------------------------------------- leaf

fn tleaf_json(l: &TLeaf) -> Value {
    match l {
        TLeaf::Single(w) => json!({ "cell": json::weyls(w) }),
        TLeaf::Pair(u, v) => json!({ "u": json::weyls(u), "v": json::weyls(v) }),
    }
}

fn coset(c: &leaves::TorusCoset) -> Value {
    json!({ "rep": json::torus(&c.rep), "annihilator": c.ann.basis })
}

fn fot_of(v: &Value) -> std::result::Result<FoTArrow, Failure> {
    match v.get("kind").and_then(Value::as_str) {
        Some("gamma") => Ok(j_map(&json::parse_gamma(v)?)),
        Some("fot") => Ok(json::parse_fot(v)?),
        _ => Err(Failure::new(EXIT_LEAF, "expected a gamma or fot record")),
    }
}

fn leaf_cmd(c: &Common, op: LeafOp, words: Option<&str>, v: Option<&str>, input: Option<Value>) -> CResult {
    match op {
        LeafOp::Dim => {
            let w = parse_weyl_words(c.rank, words.ok_or_else(|| Failure::new(EXIT_LEAF, "--words is required"))?)?;
            if w.is_empty() {
                return Err(Failure::new(EXIT_LEAF, "w must be nonempty"));
            }
            Ok(match v {
                Some(v) => {
                    let v = parse_weyl_words(c.rank, v)?;
                    json!({ "u": json::weyls(&w), "v": json::weyls(&v), "dim": leaves::leaf_dim_uv(&w, &v) })
                }
                None => json!({ "w": json::weyls(&w), "dim": leaves::leaf_dim(&w) }),
            })
        }
        LeafOp::Classify => {
            let v = need(input, "an arrow")?;
            let a = fot_of(&v)?;
            let reps = Reps::bar(&a.p.w);
            let mu = leaves::mu(&a.p, &a.t, &reps).map_err(leaf)?;
            let delta = leaves::delta(&a.t, &reps.w);
            Ok(json!({
                "tleaf": tleaf_json(&leaves::tleaf_fot(&a)),
                "leaf_dim": leaves::leaf_dim(&a.p.w),
                "mu": coset(&mu),
                "delta": coset(&delta),
                "in_sigma": leaves::sigma_member(&a, &reps).map_err(leaf)?,
            }))
        }
        LeafOp::SameLeaf => {
            let v = need(input, "two arrows")?;
            let xs = json::array(&v)?;
            if xs.len() != 2 {
                return Err(Failure::new(EXIT_LEAF, "same-leaf takes two arrows"));
            }
            let (a, b) = (fot_of(&xs[0])?, fot_of(&xs[1])?);
            if a.p.w != b.p.w {
                return Ok(json!({ "same_leaf": false, "reason": "different T-leaves" }));
            }
            let same = leaves::same_leaf(&a, &b, &Reps::bar(&a.p.w)).map_err(leaf)?;
            Ok(json!({ "same_leaf": same }))
        }
        LeafOp::Fiber => {
            let v = need(input, "a record {point, t}")?;
            let p = json::parse_fn_point(json::field(&v, "point")?)?;
            let t = json::parse_torus(json::field(&v, "t")?)?;
            if t.rank() != p.rank() {
                return Err(Failure::new(EXIT_LEAF, "torus element has the wrong rank"));
            }
            let fib = leaves::cover_fiber(&p, &t, &Reps::bar(&p.w)).map_err(leaf)?;
            Ok(json!({ "count": fib.len(), "fiber": fib.iter().map(json::torus).collect::<Vec<_>>() }))
        }
    }
}

// ---------------------------------------------------------------- verify

pub fn report_json(r: &Report) -> Value {
    let first = r.first_failure().map(|t| {
        json!({
            "property": t.property,
            "sample": t.counterexample.as_ref().map(|c| c.sample),
            "detail": t.counterexample.as_ref().map(|c| c.detail.clone()),
        })
    });
    json!({
        "suite": r.suite,
        "rank": r.rank,
        "n": r.n,
        "seed": r.seed,
        "samples": r.samples,
        "pass": r.passes(),
        "fail": r.failures(),
        "properties": r.tallies.iter().map(|t| json!({
            "name": t.property,
            "control": t.control,
            "pass": t.pass,
            "fail": t.fail,
            "errors": t.errors,
            "ok": t.ok(),
            "counterexample": t.counterexample.as_ref().map(|c| json!({ "sample": c.sample, "detail": c.detail })),
        })).collect::<Vec<_>>(),
        "first_counterexample": first,
    })
}

fn verify_cmd(c: &Common, suite: &str, input: Option<Value>) -> Outcome {
    if c.rank > verify::MAX_RANK {
        return fail(Failure::new(EXIT_DOMAIN, format!("verification supports rank at most {}", verify::MAX_RANK)));
    }
    if c.n == 0 || c.samples == 0 {
        return fail(Failure::new(EXIT_DOMAIN, "--n and --samples must be positive"));
    }
    let cfg = Config { rank: c.rank, n: c.n, samples: c.samples, seed: c.seed };
    let report = match suite {
        "all" => {
            let mut tallies = Vec::new();
            for s in Suite::ALL {
                for mut t in verify::run(s, &cfg).tallies {
                    t.property = format!("{}: {}", s.name(), t.property);
                    tallies.push(t);
                }
            }
            Report { suite: "all".into(), rank: c.rank, n: c.n, seed: c.seed, samples: c.samples, tallies }
        }
        "fixture" => match input {
            Some(v) => match fixture(&v, &cfg) {
                Ok(r) => r,
                Err(f) => return fail(f),
            },
            None => return fail(Failure::new(EXIT_DOMAIN, "a fixture file is expected via --json-in")),
        },
        name => match Suite::parse(name) {
            Some(s) => verify::run(s, &cfg),
            None => return fail(Failure::new(EXIT_DOMAIN, format!("unknown suite {name:?}"))),
        },
    };
    let code = if report.failures() == 0 { EXIT_OK } else { EXIT_SUITE };
    Outcome { value: report_json(&report), code }
}

/// Replay recorded groupoid operations and compare with the recorded results.
///
/// A fixture is `{"cases": [{"op": ..., "model": ..., "input": ..., "expect": ...}]}`;
/// `expect` is the `result` value printed by `groupoid`.
pub fn fixture(v: &Value, cfg: &Config) -> std::result::Result<Report, Failure> {
    let cases = json::array(json::field(v, "cases")?)?;
    let mut tallies = Vec::new();
    for (i, case) in cases.iter().enumerate() {
        let op = json::field(case, "op")?.as_str().unwrap_or_default();
        let model = json::field(case, "model")?.as_str().unwrap_or_default();
        let (Ok(op), Ok(model)) = (GroupoidOp::from_str(op, true), Model::from_str(model, true)) else {
            return Err(Failure::new(EXIT_DOMAIN, format!("case {i}: unknown op or model")));
        };
        let common = Common { model, json_in: None, json_out: None, ..common_of(cfg) };
        let got = groupoid(&common, op, false, case.get("u").and_then(Value::as_str), Some(json::field(case, "input")?.clone()));
        let expect = json::field(case, "expect")?;
        let tally = verify::tally(format!("fixture case {i}: {} in {}", case["op"].as_str().unwrap_or_default(), case["model"].as_str().unwrap_or_default()), cfg.seed, 1, |_| match &got {
            Ok(out) if &out["result"] == expect => Ok(()),
            Ok(out) => Err(verify::Fail(format!("expected {expect}, got {}", out["result"]))),
            Err(f) => Err(verify::Fail(format!("error {}", f.value))),
        });
        tallies.push(tally);
    }
    Ok(Report { suite: "fixture".into(), rank: cfg.rank, n: cfg.n, seed: cfg.seed, samples: cases.len(), tallies })
}

fn common_of(cfg: &Config) -> Common {
    Common {
        rank: cfg.rank,
        n: cfg.n,
        samples: cfg.samples,
        seed: cfg.seed,
        model: Model::Gamma,
        json_in: None,
        json_out: None,
    }
}

// ---------------------------------------------------------------- entry point

fn read_input(path: &std::path::Path) -> std::result::Result<Value, Failure> {
    let text = if path.as_os_str() == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(|e| Failure::new(EXIT_DOMAIN, e.to_string()))?
    } else {
        std::fs::read_to_string(path).map_err(|e| Failure::new(EXIT_DOMAIN, format!("{}: {e}", path.display())))?
    };
    serde_json::from_str(&text).map_err(|e| Failure::new(EXIT_DOMAIN, format!("{}: {e}", path.display())))
}

/// Parse arguments, run, print, and return the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_DOMAIN } else { EXIT_OK };
        }
    };
    let input = match cli.common.json_in.as_deref().map(read_input).transpose() {
        Ok(v) => v,
        Err(f) => return emit(&cli, Outcome { value: f.value, code: f.code }),
    };
    let out = run(&cli, input);
    emit(&cli, out)
}

fn emit(cli: &Cli, out: Outcome) -> i32 {
    let text = serde_json::to_string_pretty(&out.value).expect("serializable");
    {
        use std::io::Write;
        // a closed pipe downstream is not an error of the command
        let _ = writeln!(std::io::stdout().lock(), "{text}");
    }
    if let Some(path) = &cli.common.json_out {
        if let Err(e) = std::fs::write(path, format!("{text}\n")) {
            eprintln!("cannot write {}: {e}", path.display());
            return EXIT_DOMAIN;
        }
    }
    if out.code != EXIT_OK {
        if let Some(msg) = out.value.get("error").and_then(Value::as_str) {
            eprintln!("error: {msg}");
        } else if let Some(p) = out.value.get("first_counterexample").and_then(|f| f.get("property")) {
            eprintln!("suite failed: {p}");
        }
    }
    out.code
}
