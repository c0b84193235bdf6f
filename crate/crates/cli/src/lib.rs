//! Suite specifications, the check catalog, and deterministic report
//! assembly for the `lgk` verification driver.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use lgk_core::chevalley::{
    commutes_with_pinned, sends_pinning_to_opposite, square_inner_witness, ChevalleyInvolution,
};
use lgk_core::chidata::{minus_one_preserves_orbits, ChiData};
use lgk_core::cyclo::CycField;
use lgk_core::endofourier::{
    contragredient_shift, fixed_torus_characters, fourier_forward, fourier_invert,
    random_finite_order_action, whittaker_shift, Character, FinAbGroup, GroupAutomorphism,
    PacketTable,
};
use lgk_core::error::Error;
use lgk_core::fixedgroup::{
    build_fixed_datum, confirm_witness_in_model, fixed_datum_json, fixed_weyl_order,
    verify_chevalley_on_fixed,
};
use lgk_core::lembed::{search_rcochains, verify_chi_inv, LEmbedding};
use lgk_core::models;
use lgk_core::rootdatum::{BasedRootDatum, Isogeny, PinnedAutomorphism, TypeLetter};
use lgk_core::splitinv;
use lgk_core::tits::{
    check_section_well_defined, inverse_section_identity_check, ExtWeylElem,
};
use lgk_core::torus::{CoeffAction, CoeffGroup};
use lgk_core::twist::GammaTwist;
use lgk_core::weyl::{WeylElem, WeylGroup};

pub const SUITE_NAMES: &[&str] = &[
    "tits-welldef",
    "inverse-section",
    "splcng",
    "chiinv",
    "chevalley",
    "fixedgroup",
    "orbit-minus-one",
    "fourier",
    "whittaker-shift",
    "contragredient-shift",
    "coinvariants",
];

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteSpec {
    pub group: GroupSpec,
    #[serde(default)]
    pub theta: Option<Vec<usize>>,
    #[serde(default)]
    pub gamma: Option<GammaSpec>,
    #[serde(default)]
    pub coeff: CoeffSpec,
    #[serde(default)]
    pub data: DataSpec,
    pub suites: Vec<String>,
    #[serde(default)]
    pub bounds: BoundsSpec,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GroupSpec {
    #[serde(rename = "type")]
    pub letter: String,
    pub rank: usize,
    #[serde(default = "default_isogeny")]
    pub isogeny: String,
}

fn default_isogeny() -> String {
    "simply-connected".into()
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GammaSpec {
    pub order: u64,
    /// 1-based word for the Weyl image of the generator.
    #[serde(default, rename = "weylWord")]
    pub weyl_word: Vec<usize>,
    /// Use the spec's theta as the pinned part of the generator.
    #[serde(default)]
    pub pinned: bool,
    /// Coefficient action of the generator: zeta -> zeta^zetaExp.
    #[serde(default, rename = "zetaExp")]
    pub zeta_exp: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoeffSpec {
    pub n: u64,
    pub symbols: Vec<String>,
}

impl Default for CoeffSpec {
    fn default() -> Self {
        CoeffSpec { n: 24, symbols: vec!["a".into(), "c1".into(), "c2".into(), "two".into()] }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DataSpec {
    #[serde(default = "default_true")]
    pub random: bool,
    #[serde(default = "default_instances")]
    pub instances: usize,
}

fn default_true() -> bool {
    true
}
fn default_instances() -> usize {
    20
}

impl Default for DataSpec {
    fn default() -> Self {
        DataSpec { random: true, instances: default_instances() }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BoundsSpec {
    #[serde(default = "default_weyl_cap", rename = "weylCap")]
    pub weyl_cap: usize,
    #[serde(default = "default_search_depth", rename = "searchDepth")]
    pub search_depth: u64,
}

fn default_weyl_cap() -> usize {
    10_000
}
fn default_search_depth() -> u64 {
    4
}

impl Default for BoundsSpec {
    fn default() -> Self {
        BoundsSpec { weyl_cap: default_weyl_cap(), search_depth: default_search_depth() }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
    Skipped,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CheckRecord {
    pub id: String,
    pub suite: String,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<serde_json::Value>,
    #[serde(rename = "runtimeMs")]
    pub runtime_ms: Option<u64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GlobalInfo {
    pub seed: u64,
    #[serde(rename = "toolVersion")]
    pub tool_version: String,
    #[serde(rename = "specHash")]
    pub spec_hash: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Report {
    pub global: GlobalInfo,
    pub checks: Vec<CheckRecord>,
}

impl Report {
    pub fn exit_code(&self) -> i32 {
        if self.checks.iter().any(|c| c.status == CheckStatus::Fail) {
            1
        } else {
            0
        }
    }

    pub fn to_pretty_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialization")
    }
}

/// Canonical hash: the spec re-serialized as JSON with sorted keys.
pub fn spec_hash(value: &serde_json::Value) -> String {
    let canonical = serde_json::to_string(value).expect("canonical json");
    let mut h = Sha256::new();
    h.update(canonical.as_bytes());
    hex::encode(h.finalize())
}

/// Parses a spec file, accepting JSON (canonical) or TOML (convenience).
pub fn parse_spec(text: &str) -> Result<(SuiteSpec, serde_json::Value), String> {
    let value: serde_json::Value = match serde_json::from_str(text) {
        Ok(v) => v,
        Err(json_err) => match toml::from_str::<toml::Value>(text) {
            Ok(t) => serde_json::to_value(t).map_err(|e| e.to_string())?,
            Err(toml_err) => {
                return Err(format!(
                    "spec is neither JSON ({json_err}) nor TOML ({toml_err})"
                ))
            }
        },
    };
    let spec: SuiteSpec =
        serde_json::from_value(value.clone()).map_err(|e| format!("invalid spec: {e}"))?;
    for s in &spec.suites {
        if !SUITE_NAMES.contains(&s.as_str()) {
            return Err(format!("unknown suite `{s}`"));
        }
    }
    Ok((spec, value))
}

struct Ctx {
    spec: SuiteSpec,
    seed: u64,
    timings: bool,
    datum: Arc<BasedRootDatum>,
    coeff: Arc<CoeffGroup>,
    checks: Vec<CheckRecord>,
}

impl Ctx {
    fn push(&mut self, suite: &str, id: String, result: Result<Option<serde_json::Value>, serde_json::Value>, started: std::time::Instant) {
        let runtime_ms = if self.timings {
            Some(started.elapsed().as_millis() as u64)
        } else {
            None
        };
        let (status, witness) = match result {
            Ok(w) => (CheckStatus::Pass, w),
            Err(w) => (CheckStatus::Fail, Some(w)),
        };
        self.checks.push(CheckRecord { id, suite: suite.into(), status, witness, runtime_ms });
    }

    fn skip(&mut self, suite: &str, id: String, reason: &str) {
        self.checks.push(CheckRecord {
            id,
            suite: suite.into(),
            status: CheckStatus::Skipped,
            witness: Some(serde_json::json!({ "reason": reason })),
            runtime_ms: None,
        });
    }
}

pub fn parse_group(spec: &GroupSpec) -> Result<Arc<BasedRootDatum>, Error> {
    let letter: TypeLetter = spec.letter.parse()?;
    let isogeny = match spec.isogeny.as_str() {
        "simply-connected" | "sc" => Isogeny::SimplyConnected,
        "adjoint" | "adj" => Isogeny::Adjoint,
        other => return Err(Error::InvalidType(format!("isogeny `{other}`"))),
    };
    BasedRootDatum::build(letter, spec.rank, isogeny)
}

/// Executes the named suites of the spec and assembles the report.
/// Deterministic given (spec, seed); record order is fixed by sorting on id.
pub fn run_suites(
    spec: &SuiteSpec,
    spec_value: &serde_json::Value,
    seed: u64,
    timings: bool,
) -> Result<Report, String> {
    let datum = parse_group(&spec.group).map_err(|e| e.to_string())?;
    let coeff = CoeffGroup::new(
        spec.coeff.n,
        &spec.coeff.symbols.iter().map(|s| s.as_str()).collect::<Vec<_>>(),
    )
    .map_err(|e| e.to_string())?;
    let mut ctx = Ctx { spec: spec.clone(), seed, timings, datum, coeff, checks: Vec::new() };
    for suite in spec.suites.clone() {
        match suite.as_str() {
            "tits-welldef" => suite_tits_welldef(&mut ctx),
            "inverse-section" => suite_inverse_section(&mut ctx),
            "splcng" => suite_splcng(&mut ctx),
            "chiinv" => suite_chiinv(&mut ctx),
            "chevalley" => suite_chevalley(&mut ctx),
            "fixedgroup" => suite_fixedgroup(&mut ctx),
            "orbit-minus-one" => suite_orbit_minus_one(&mut ctx),
            "fourier" => suite_fourier(&mut ctx),
            "whittaker-shift" => suite_whittaker(&mut ctx),
            "contragredient-shift" => suite_contragredient(&mut ctx),
            "coinvariants" => suite_coinvariants(&mut ctx),
            other => return Err(format!("unknown suite `{other}`")),
        }
    }
    ctx.checks.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(Report {
        global: GlobalInfo {
            seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            spec_hash: spec_hash(spec_value),
        },
        checks: ctx.checks,
    })
}

fn theta_of(ctx: &Ctx) -> Result<Option<PinnedAutomorphism>, Error> {
    match &ctx.spec.theta {
        None => Ok(None),
        Some(p) => {
            let perm: Vec<usize> = p.iter().map(|&i| i.wrapping_sub(1)).collect();
            Ok(Some(PinnedAutomorphism::from_simple_perm(&ctx.datum, &perm)?))
        }
    }
}

fn gamma_of(ctx: &Ctx) -> Result<Option<GammaTwist>, Error> {
    match &ctx.spec.gamma {
        None => Ok(None),
        Some(g) => {
            let word: Vec<usize> = g.weyl_word.iter().map(|&i| i.wrapping_sub(1)).collect();
            let w = WeylElem::from_word(&ctx.datum, &word);
            let pin = if g.pinned { theta_of(ctx)? } else { None };
            let act = match g.zeta_exp {
                Some(e) => CoeffAction {
                    zeta_mult: e,
                    symbol_perm: (0..ctx.coeff.symbols.len()).collect(),
                },
                None => CoeffAction::identity(&ctx.coeff),
            };
            Ok(Some(GammaTwist::new(&ctx.datum, &ctx.coeff, g.order, w, pin, act)?))
        }
    }
}

fn diagram_automorphisms(datum: &Arc<BasedRootDatum>) -> Vec<PinnedAutomorphism> {
    let rank = datum.rank;
    let mut perms: Vec<Vec<usize>> = Vec::new();
    fn gen(cur: &mut Vec<usize>, rest: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if rest.is_empty() {
            out.push(cur.clone());
            return;
        }
        for i in 0..rest.len() {
            let v = rest.remove(i);
            cur.push(v);
            gen(cur, rest, out);
            cur.pop();
            rest.insert(i, v);
        }
    }
    gen(&mut Vec::new(), &mut (0..rank).collect(), &mut perms);
    perms
        .into_iter()
        .filter_map(|p| PinnedAutomorphism::from_simple_perm(datum, &p).ok())
        .collect()
}

fn suite_tits_welldef(ctx: &mut Ctx) {
    let started = std::time::Instant::now();
    let label = ctx.datum.label();
    let wg = match WeylGroup::enumerate(&ctx.datum, ctx.spec.bounds.weyl_cap) {
        Ok(g) => g,
        Err(e) => {
            ctx.push(
                "tits-welldef",
                format!("tits-welldef/{label}"),
                Err(serde_json::json!({ "error": e.to_string() })),
                started,
            );
            return;
        }
    };
    let res = check_section_well_defined(&wg, &ctx.coeff);
    let word_check = res.map_err(|(w, word)| {
        serde_json::json!({
            "element": w.word.iter().map(|i| i + 1).collect::<Vec<_>>(),
            "offendingWord": word.iter().map(|i| i + 1).collect::<Vec<_>>(),
        })
    });
    ctx.push(
        "tits-welldef",
        format!("tits-welldef/{label}/reduced-words"),
        word_check.map(|_| None),
        started,
    );

    // matrix oracle comparison where a model exists
    let started = std::time::Instant::now();
    let field = CycField::new(ctx.coeff.n);
    match models::realize(ctx.datum.letter, ctx.datum.rank, &field) {
        Ok(model) if model.datum == ctx.datum => {
            let assign = BTreeMap::new();
            let mut failure = None;
            'outer: for w in &wg.elements {
                let sym = ExtWeylElem::section(w, &ctx.coeff);
                let embedded = match model.embed_ext(&sym, &assign) {
                    Ok(m) => m,
                    Err(e) => {
                        failure = Some(serde_json::json!({ "error": e.to_string() }));
                        break;
                    }
                };
                for word in w.all_reduced_words() {
                    if model.word_matrix(&word) != embedded {
                        failure = Some(serde_json::json!({
                            "element": w.word.iter().map(|i| i + 1).collect::<Vec<_>>(),
                            "word": word.iter().map(|i| i + 1).collect::<Vec<_>>(),
                        }));
                        break 'outer;
                    }
                }
            }
            let res = match failure {
                None => Ok(None),
                Some(w) => Err(w),
            };
            ctx.push("tits-welldef", format!("tits-welldef/{label}/matrix-oracle"), res, started);
        }
        _ => ctx.skip(
            "tits-welldef",
            format!("tits-welldef/{label}/matrix-oracle"),
            "no matrix model realizes this datum",
        ),
    }
}

fn suite_inverse_section(ctx: &mut Ctx) {
    let started = std::time::Instant::now();
    let label = ctx.datum.label();
    let wg = match WeylGroup::enumerate(&ctx.datum, ctx.spec.bounds.weyl_cap) {
        Ok(g) => g,
        Err(e) => {
            ctx.push(
                "inverse-section",
                format!("inverse-section/{label}"),
                Err(serde_json::json!({ "error": e.to_string() })),
                started,
            );
            return;
        }
    };
    for other_root in [false, true] {
        let started = std::time::Instant::now();
        let mut res = Ok(None);
        for w in &wg.elements {
            if let Err(witness) = inverse_section_identity_check(w, &ctx.coeff, other_root) {
                res = Err(serde_json::json!({
                    "element": w.word.iter().map(|i| i + 1).collect::<Vec<_>>(),
                    "lhs": witness.to_json(),
                }));
                break;
            }
        }
        let tag = if other_root { "minus-i" } else { "i" };
        ctx.push("inverse-section", format!("inverse-section/{label}/{tag}"), res, started);
    }
}

fn suite_splcng(ctx: &mut Ctx) {
    let label = ctx.datum.label();
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed);
    // a spec-supplied gamma fixes the twist for every instance; otherwise
    // the instance generator alternates between Z/2 and Z/3 twists
    let fixed_twist = match gamma_of(ctx) {
        Ok(t) => t,
        Err(e) => {
            ctx.push(
                "splcng",
                format!("splcng/{label}/gamma"),
                Err(serde_json::json!({ "error": e.to_string() })),
                std::time::Instant::now(),
            );
            return;
        }
    };
    let orders: Vec<u64> = vec![2, 3];
    for i in 0..ctx.spec.data.instances {
        let started = std::time::Instant::now();
        let id = format!("splcng/{label}/instance-{i:03}");
        let res = (|| {
            let (twist, adata, scaling) = match &fixed_twist {
                Some(tw) => {
                    let adata = lgk_core::chidata::AData::random_valid(
                        &ctx.datum, &ctx.coeff, tw, None, &mut rng,
                    )
                    .map_err(|e| serde_json::json!({ "seed": ctx.seed, "error": e.to_string() }))?;
                    let scaling = lgk_core::chidata::ScalingVector::constant(
                        &ctx.datum,
                        lgk_core::torus::KElem::symbol(&ctx.coeff, "c1").map_err(|e| {
                            serde_json::json!({ "seed": ctx.seed, "error": e.to_string() })
                        })?,
                    );
                    (tw.clone(), adata, scaling)
                }
                None => {
                    let order = orders[i % orders.len()];
                    let inst =
                        splitinv::random_instance(&ctx.datum, &ctx.coeff, order, &mut rng)
                            .map_err(|e| {
                                serde_json::json!({ "seed": ctx.seed, "error": e.to_string() })
                            })?;
                    (inst.twist, inst.adata, inst.scaling)
                }
            };
            match splitinv::verify_splcng(&twist, &adata, &scaling)
                .map_err(|e| serde_json::json!({ "seed": ctx.seed, "error": e.to_string() }))?
            {
                Ok(()) => Ok(None),
                Err(w) => Err(serde_json::json!({
                    "seed": ctx.seed,
                    "sigma": w.sigma,
                    "lhs": w.lhs.to_json(),
                    "rhs": w.rhs.to_json(),
                })),
            }
        })();
        ctx.push("splcng", id, res, started);
    }
}

fn suite_chiinv(ctx: &mut Ctx) {
    let dual = ctx.datum.dual();
    let label = format!("{}-dual", ctx.datum.label());
    let started = std::time::Instant::now();
    let chev = match ChevalleyInvolution::build(&dual, &ctx.coeff) {
        Ok(c) => c,
        Err(e) => {
            ctx.push(
                "chiinv",
                format!("chiinv/{label}"),
                Err(serde_json::json!({ "error": e.to_string() })),
                started,
            );
            return;
        }
    };
    // trivial Gamma_f
    let started = std::time::Instant::now();
    let res = (|| {
        let tw = Arc::new(GammaTwist::trivial(&dual, &ctx.coeff));
        let emb = LEmbedding::build(&tw, lgk_core::lembed::RCochain::trivial(&tw, ChiData::trivial(&dual, &ctx.coeff)))
            .map_err(|e| serde_json::json!({ "error": e.to_string() }))?;
        let neg = LEmbedding::build(&tw, emb.r.negate())
            .map_err(|e| serde_json::json!({ "error": e.to_string() }))?;
        match verify_chi_inv(&chev, &emb, &neg, false)
            .map_err(|e| serde_json::json!({ "error": e.to_string() }))?
        {
            Ok(()) => Ok(None),
            Err(w) => Err(serde_json::json!({ "gamma": w.gamma, "lhs": w.lhs.to_json() })),
        }
    })();
    ctx.push("chiinv", format!("chiinv/{label}/trivial-gamma"), res, started);

    // order-2 Weyl twists on the dual with searched cochains
    let started = std::time::Instant::now();
    let wg = match WeylGroup::enumerate(&dual, ctx.spec.bounds.weyl_cap) {
        Ok(g) => g,
        Err(_) => return,
    };
    let order_two: Vec<&WeylElem> =
        wg.elements.iter().filter(|w| !w.is_identity() && w.compose(w).is_identity()).collect();
    let bound = ctx.spec.bounds.search_depth;
    for (wi, w) in order_two.iter().enumerate() {
        let started_inner = std::time::Instant::now();
        let id = format!("chiinv/{label}/twist-{wi:02}");
        let res = (|| {
            let tw = GammaTwist::new(
                &dual,
                &ctx.coeff,
                2,
                (*w).clone(),
                None,
                CoeffAction::identity(&ctx.coeff),
            )
            .map_err(|e| serde_json::json!({ "error": e.to_string() }))?;
            let tw = Arc::new(tw);
            let label_chi = ChiData::of_torsion_order(&dual, &ctx.coeff, 4)
                .map_err(|e| serde_json::json!({ "error": e.to_string() }))?;
            let found = search_rcochains(&tw, &label_chi, bound)
                .map_err(|e| serde_json::json!({ "error": e.to_string() }))?;
            let mut verified = 0;
            for r in found {
                let emb = LEmbedding::build(&tw, r)
                    .map_err(|e| serde_json::json!({ "error": e.to_string() }))?;
                let neg = LEmbedding::build(&tw, emb.r.negate())
                    .map_err(|e| serde_json::json!({ "error": e.to_string() }))?;
                match verify_chi_inv(&chev, &emb, &neg, false)
                    .map_err(|e| serde_json::json!({ "error": e.to_string() }))?
                {
                    Ok(()) => verified += 1,
                    Err(wit) => {
                        return Err(serde_json::json!({
                            "gamma": wit.gamma,
                            "lhs": wit.lhs.to_json(),
                            "rhs": wit.rhs.to_json(),
                        }))
                    }
                }
            }
            Ok(Some(serde_json::json!({ "cochainsVerified": verified })))
        })();
        ctx.push("chiinv", id, res, started_inner);
    }
    let _ = started;
}

fn suite_chevalley(ctx: &mut Ctx) {
    // the suite runs on the model's natural datum so the full matrix-level
    // checks apply; an additional lattice-level build covers the datum from
    // the spec when it differs
    let field = CycField::new(ctx.coeff.n);
    let started = std::time::Instant::now();
    let model = match models::realize(ctx.datum.letter, ctx.datum.rank, &field) {
        Ok(m) => m,
        Err(e) => {
            ctx.push(
                "chevalley",
                format!("chevalley/{}", ctx.datum.label()),
                Err(serde_json::json!({ "error": e.to_string() })),
                started,
            );
            return;
        }
    };
    let datum = model.datum.clone();
    let label = datum.label();
    let chev = match ChevalleyInvolution::build_with_model(&datum, &ctx.coeff, &model) {
        Ok(c) => c,
        Err(e) => {
            ctx.push(
                "chevalley",
                format!("chevalley/{label}/build"),
                Err(serde_json::json!({ "error": e.to_string() })),
                started,
            );
            return;
        }
    };
    ctx.push("chevalley", format!("chevalley/{label}/build"), Ok(None), started);

    let started = std::time::Instant::now();
    let res = sends_pinning_to_opposite(&chev, &model)
        .map(|_| None)
        .map_err(|e| serde_json::json!({ "error": e.to_string() }));
    ctx.push("chevalley", format!("chevalley/{label}/opposite-splitting"), res, started);

    // lattice part: inversion on the torus, diagram part = -w0
    let started = std::time::Instant::now();
    let res = (|| {
        let m = chev.char_lattice_map();
        for i in 0..datum.dim {
            for j in 0..datum.dim {
                let expect = if i == j { -1 } else { 0 };
                if m[(i, j)] != expect {
                    return Err(serde_json::json!({ "latticeMap": format!("{:?}", m.a) }));
                }
            }
        }
        let delta = lgk_core::chevalley::opposition_permutation(&datum, &chev.w0)
            .map_err(|e| serde_json::json!({ "error": e.to_string() }))?;
        if delta != chev.diagram.perm {
            return Err(serde_json::json!({ "diagram": chev.diagram.perm }));
        }
        Ok(None)
    })();
    ctx.push("chevalley", format!("chevalley/{label}/lattice-part"), res, started);

    for (ai, pa) in diagram_automorphisms(&datum).into_iter().enumerate() {
        let started = std::time::Instant::now();
        let id = format!("chevalley/{label}/commutes-{ai}");
        if model.realize_pinned(&pa).is_ok() {
            let res = commutes_with_pinned(&chev, &model, &pa)
                .map(|_| Some(serde_json::json!({ "level": "matrix" })))
                .map_err(|e| serde_json::json!({ "error": e.to_string() }));
            ctx.push("chevalley", id, res, started);
        } else {
            let res = ext_level_commutes(&chev, &pa)
                .map(|_| Some(serde_json::json!({ "level": "extended-weyl" })))
                .map_err(|w| w);
            ctx.push("chevalley", id, res, started);
        }
    }

    let started = std::time::Instant::now();
    let res = square_inner_witness(&chev, &model)
        .map(|w| Some(serde_json::json!({ "innerWitnessExponents": w })))
        .map_err(|e| serde_json::json!({ "error": e.to_string() }));
    ctx.push("chevalley", format!("chevalley/{label}/square-inner"), res, started);
}

/// Symbolic commutation check on Tits sections and torus generators.
pub fn ext_level_commutes(
    chev: &ChevalleyInvolution,
    pa: &PinnedAutomorphism,
) -> Result<(), serde_json::Value> {
    let datum = &chev.datum;
    let coeff = &chev.coeff;
    let mut samples: Vec<ExtWeylElem> = Vec::new();
    for i in 0..datum.rank {
        samples.push(ExtWeylElem::section(&WeylElem::reflection(datum, i), coeff));
    }
    samples.push(ExtWeylElem::section(&chev.w0, coeff));
    if let Ok(sym) = lgk_core::torus::KElem::symbol(coeff, "a") {
        for i in 0..datum.dim {
            let mut mu = vec![0i64; datum.dim];
            mu[i] = 1;
            samples.push(ExtWeylElem::from_torus(
                lgk_core::torus::TorusPoint::eval_cocharacter(datum, &mu, &sym),
            ));
        }
    }
    // a couple of products
    let extra: Vec<ExtWeylElem> = samples
        .iter()
        .take(3)
        .zip(samples.iter().skip(1))
        .map(|(a, b)| a.mul(b))
        .collect();
    samples.extend(extra);
    for e in &samples {
        let lhs = chev.ext_map(&e.pinned_apply(pa));
        let rhs = chev.ext_map(e).pinned_apply(pa);
        if lhs != rhs {
            return Err(serde_json::json!({
                "element": e.to_json(),
                "lhs": lhs.to_json(),
                "rhs": rhs.to_json(),
            }));
        }
    }
    Ok(())
}

fn suite_fixedgroup(ctx: &mut Ctx) {
    let label = ctx.datum.label();
    let started = std::time::Instant::now();
    let theta = match theta_of(ctx) {
        Ok(Some(t)) => t,
        Ok(None) => PinnedAutomorphism::identity(&ctx.datum),
        Err(e) => {
            ctx.push(
                "fixedgroup",
                format!("fixedgroup/{label}"),
                Err(serde_json::json!({ "error": e.to_string() })),
                started,
            );
            return;
        }
    };
    let res = (|| {
        let fd = build_fixed_datum(&ctx.datum, &theta)
            .map_err(|e| serde_json::json!({ "error": e.to_string() }))?;
        let chev = ChevalleyInvolution::build(&ctx.datum, &ctx.coeff)
            .map_err(|e| serde_json::json!({ "error": e.to_string() }))?;
        let witness =
            verify_chevalley_on_fixed(&fd, &chev, &ctx.coeff, ctx.spec.bounds.search_depth as i64)
                .map_err(|e| serde_json::json!({ "error": e.to_string() }))?;
        // confirm in the matrix model when one realizes this datum
        let field = CycField::new(ctx.coeff.n);
        let mut model_confirmed = false;
        if let Ok(model) = models::realize(ctx.datum.letter, ctx.datum.rank, &field) {
            if model.datum == ctx.datum {
                confirm_witness_in_model(&fd, &chev, &model, &witness.witness)
                    .map_err(|e| serde_json::json!({ "error": e.to_string() }))?;
                model_confirmed = true;
            }
        }
        let weyl_ok = fixed_weyl_order(&ctx.datum, &theta, ctx.spec.bounds.weyl_cap)
            .ok()
            .zip(WeylGroup::enumerate(&fd.restricted, ctx.spec.bounds.weyl_cap).ok())
            .map(|(n, g)| n == g.order());
        Ok(Some(serde_json::json!({
            "fixed": fixed_datum_json(&fd),
            "conjugatorExponents": witness.two_exponents,
            "modelConfirmed": model_confirmed,
            "weylOrderMatch": weyl_ok,
        })))
    })();
    ctx.push("fixedgroup", format!("fixedgroup/{label}"), res, started);
}

fn suite_orbit_minus_one(ctx: &mut Ctx) {
    let label = ctx.datum.label();
    let autos: Vec<PinnedAutomorphism> = match theta_of(ctx) {
        Ok(Some(t)) => vec![t],
        _ => diagram_automorphisms(&ctx.datum),
    };
    for (ai, pa) in autos.into_iter().enumerate() {
        let started = std::time::Instant::now();
        let res = match minus_one_preserves_orbits(&ctx.datum, &pa) {
            Ok(()) => Ok(None),
            Err(orbit) => Err(serde_json::json!({
                "orbit": orbit.members,
                "label": orbit.label.to_string(),
            })),
        };
        ctx.push("orbit-minus-one", format!("orbit-minus-one/{label}/theta-{ai}"), res, started);
    }
}

fn random_group(rng: &mut impl Rng) -> FinAbGroup {
    // invariant factor chains with order up to 64
    const CHAINS: &[&[u64]] = &[
        &[2],
        &[3],
        &[4],
        &[6],
        &[8],
        &[12],
        &[16],
        &[24],
        &[32],
        &[48],
        &[64],
        &[2, 2],
        &[2, 4],
        &[2, 8],
        &[2, 16],
        &[3, 3],
        &[4, 4],
        &[2, 6],
        &[4, 8],
        &[2, 2, 2],
        &[2, 2, 4],
        &[2, 2, 8],
    ];
    let chain = CHAINS[rng.gen_range(0..CHAINS.len())];
    FinAbGroup::new(chain.to_vec()).expect("chain by construction")
}

fn suite_fourier(ctx: &mut Ctx) {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed ^ 0xf0f0);
    for i in 0..ctx.spec.data.instances {
        let started = std::time::Instant::now();
        let id = format!("fourier/instance-{i:03}");
        let res = (|| {
            let group = random_group(&mut rng);
            let table = PacketTable::new(group.clone(), None, None)
                .map_err(|e| serde_json::json!({ "seed": ctx.seed, "error": e.to_string() }))?;
            let n = group.order() as usize;
            let v: Vec<_> = (0..n)
                .map(|_| {
                    lgk_core::cyclo::Cyc::from_i64(&table.field, rng.gen_range(-20..=20))
                })
                .collect();
            let theta = fourier_invert(&table, &v)
                .map_err(|e| serde_json::json!({ "seed": ctx.seed, "error": e.to_string() }))?;
            let back = fourier_forward(&table, &theta)
                .map_err(|e| serde_json::json!({ "seed": ctx.seed, "error": e.to_string() }))?;
            if back != v {
                return Err(serde_json::json!({
                    "seed": ctx.seed,
                    "factors": group.factors,
                }));
            }
            Ok(Some(serde_json::json!({ "order": group.order() })))
        })();
        ctx.push("fourier", id, res, started);
    }
}

fn random_character(group: &FinAbGroup, rng: &mut impl Rng) -> Character {
    Character {
        group: group.clone(),
        exps: group.factors.iter().map(|&d| rng.gen_range(0..d)).collect(),
    }
}

fn suite_whittaker(ctx: &mut Ctx) {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed ^ 0x5151);
    for i in 0..ctx.spec.data.instances {
        let started = std::time::Instant::now();
        let id = format!("whittaker-shift/instance-{i:03}");
        let res = (|| {
            let group = random_group(&mut rng);
            let table = PacketTable::new(group.clone(), None, None)
                .map_err(|e| serde_json::json!({ "seed": ctx.seed, "error": e.to_string() }))?;
            let e1 = random_character(&group, &mut rng);
            let e2 = random_character(&group, &mut rng);
            let p1 = whittaker_shift(&table, &e1)
                .map_err(|e| serde_json::json!({ "seed": ctx.seed, "error": e.to_string() }))?;
            let p2 = whittaker_shift(&table, &e2)
                .map_err(|e| serde_json::json!({ "seed": ctx.seed, "error": e.to_string() }))?;
            let p12 = whittaker_shift(&table, &e1.tensor(&e2))
                .map_err(|e| serde_json::json!({ "seed": ctx.seed, "error": e.to_string() }))?;
            let composed: Vec<usize> = (0..p1.len()).map(|r| p2[p1[r]]).collect();
            if composed != p12 {
                return Err(serde_json::json!({
                    "seed": ctx.seed,
                    "factors": group.factors,
                }));
            }
            Ok(Some(serde_json::json!({ "order": group.order() })))
        })();
        ctx.push("whittaker-shift", id, res, started);
    }
}

fn random_automorphism(group: &FinAbGroup, rng: &mut impl Rng) -> GroupAutomorphism {
    // diagonal units and the occasional inversion
    let n = group.factors.len();
    loop {
        let mut mat = vec![vec![0i64; n]; n];
        for (i, row) in mat.iter_mut().enumerate() {
            let d = group.factors[i] as i64;
            let mut u = rng.gen_range(1..d.max(2));
            while num_gcd(u, d) != 1 {
                u = rng.gen_range(1..d.max(2));
            }
            row[i] = if rng.gen_bool(0.5) { u } else { -u };
        }
        let aut = GroupAutomorphism { mat };
        if aut.validate(group).is_ok() {
            return aut;
        }
    }
}

fn num_gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a.abs()
    } else {
        num_gcd(b, a.rem_euclid(b))
    }
}

fn suite_contragredient(ctx: &mut Ctx) {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed ^ 0xc0c0);
    for i in 0..ctx.spec.data.instances {
        let started = std::time::Instant::now();
        let id = format!("contragredient-shift/instance-{i:03}");
        let res = (|| {
            let group = random_group(&mut rng);
            let table = PacketTable::new(group.clone(), None, None)
                .map_err(|e| serde_json::json!({ "seed": ctx.seed, "error": e.to_string() }))?;
            let aut = random_automorphism(&group, &mut rng);
            let p = contragredient_shift(&table, &aut)
                .map_err(|e| serde_json::json!({ "seed": ctx.seed, "error": e.to_string() }))?;
            // double application equals pullback along (cAction^2)^{-1}
            let twice: Vec<usize> = (0..p.len()).map(|r| p[p[r]]).collect();
            let sq_inv = aut.compose(&aut).inverse(&group);
            let chars = table.characters();
            let expect: Vec<usize> = chars
                .iter()
                .map(|rho| table.character_index(&rho.pullback(&sq_inv)))
                .collect();
            if twice != expect {
                return Err(serde_json::json!({
                    "seed": ctx.seed,
                    "factors": group.factors,
                }));
            }
            Ok(Some(serde_json::json!({ "order": group.order() })))
        })();
        ctx.push("contragredient-shift", id, res, started);
    }
}

fn suite_coinvariants(ctx: &mut Ctx) {
    let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed ^ 0xabab);
    for i in 0..ctx.spec.data.instances {
        let started = std::time::Instant::now();
        let id = format!("coinvariants/instance-{i:03}");
        let res = (|| {
            let rank = rng.gen_range(1..=3);
            let order = if rank >= 2 && rng.gen_bool(0.5) { 3 } else { 2 };
            let action = random_finite_order_action(rank, order, &mut rng)
                .map_err(|e| serde_json::json!({ "seed": ctx.seed, "error": e.to_string() }))?;
            let co = lgk_core::endofourier::coinvariants(&action);
            let mut m = co.torsion.iter().map(|&d| d as u64).fold(1u64, lcm64);
            m = lcm64(m, 2 * order);
            let data = fixed_torus_characters(&action, m)
                .map_err(|e| serde_json::json!({ "seed": ctx.seed, "error": e.to_string() }))?;
            Ok(Some(serde_json::json!({
                "rank": rank,
                "order": order,
                "m": m,
                "fixedCount": data.fixed_count,
            })))
        })();
        ctx.push("coinvariants", id, res, started);
    }
}

fn lcm64(a: u64, b: u64) -> u64 {
    if a == 0 || b == 0 {
        return a.max(b);
    }
    a / gcd64(a, b) * b
}
fn gcd64(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd64(b, a % b)
    }
}
