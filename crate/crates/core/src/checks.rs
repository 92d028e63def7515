//! Registry of runnable checks and the shared run context.

use std::sync::OnceLock;

use serde_json::json;

use crate::bicanon::{self, burniat};
use crate::cover::enumerate::{rng_for, t_points, SurfaceEquations};
use crate::cover::z2::sample_nu;
use crate::cover::{self, FiniteProjGroup};
use crate::exactalg::{PrimeField, Scalar};
use crate::report::{timed, CheckReport, Params, Status};
use crate::unproj::FamilyParams;
use crate::{grouprep, invariants, unproj};

/// Smallest accepted prime: the least p ≡ 1 mod 4 above the degree bound 8.
pub const MIN_PRIME: u64 = 13;

/// Settings shared by all checks.
#[derive(Clone, Debug, PartialEq)]
pub struct RunConfig {
    pub primes: Vec<u64>,
    pub seed: u64,
    /// ν over ℚ; when absent ν is drawn per prime from the seed.
    pub nu: Option<[Scalar; 5]>,
    pub lambda: Scalar,
    pub max_degree: u32,
    /// Random ν per prime for the freeness certification.
    pub draws: usize,
    pub deterministic: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            primes: vec![13, 17, 29],
            seed: 0,
            nu: None,
            lambda: Scalar::int(3),
            max_degree: 4,
            draws: 5,
            deterministic: false,
        }
    }
}

#[derive(Debug, thiserror::Error, PartialEq)]
pub enum ConfigError {
    #[error("prime {0} is not ≡ 1 mod 4: ε = √−1 must lie in F_p")]
    PrimeNotOneMod4(u64),
    #[error("prime {0} is below the minimum {MIN_PRIME}: random-ν identity checks of degree ≤ 8 need p > 8")]
    PrimeTooSmall(u64),
    #[error("{0} is not a usable prime: {1}")]
    BadPrime(u64, String),
    #[error("no primes configured")]
    NoPrimes,
    #[error("nu does not reduce mod {0}")]
    NuNotReducible(u64),
    #[error("lambda must differ from 0 and 1")]
    BadLambda,
    #[error("unknown check or module '{0}'")]
    UnknownCheck(String),
}

impl RunConfig {
    pub fn fields(&self) -> Result<Vec<PrimeField>, ConfigError> {
        if self.primes.is_empty() {
            return Err(ConfigError::NoPrimes);
        }
        self.primes
            .iter()
            .map(|&p| {
                if p % 4 != 1 {
                    return Err(ConfigError::PrimeNotOneMod4(p));
                }
                if p < MIN_PRIME {
                    return Err(ConfigError::PrimeTooSmall(p));
                }
                PrimeField::new(p).map_err(|e| ConfigError::BadPrime(p, e.to_string()))
            })
            .collect()
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let fields = self.fields()?;
        if self.lambda.is_zero() || self.lambda.is_one() {
            return Err(ConfigError::BadLambda);
        }
        if let Some(nu) = &self.nu {
            for f in &fields {
                if nu.iter().any(|s| s.try_to_fp(*f).is_none()) {
                    return Err(ConfigError::NuNotReducible(f.p()));
                }
            }
        }
        Ok(())
    }
}

/// Validated config plus lazily built shared objects.
pub struct Context {
    pub cfg: RunConfig,
    pub fields: Vec<PrimeField>,
    group: OnceLock<(FiniteProjGroup, CheckReport)>,
}

impl Context {
    pub fn new(cfg: RunConfig) -> Result<Context, ConfigError> {
        cfg.validate()?;
        let fields = cfg.fields()?;
        Ok(Context { cfg, fields, group: OnceLock::new() })
    }

    pub fn group(&self) -> &(FiniteProjGroup, CheckReport) {
        self.group.get_or_init(cover::build_lifts_and_certify)
    }

    pub fn first_field(&self) -> PrimeField {
        self.fields[0]
    }

    /// `count` ν over F_p: the override reduced mod p, or seeded generic draws.
    pub fn nus(&self, f: PrimeField, count: usize) -> Vec<FamilyParams> {
        self.nus_logged(f, count).0
    }

    /// As `nus`, also returning the draws the smoothness filter rejected.
    /// An explicit ν override is never filtered.
    pub fn nus_logged(&self, f: PrimeField, count: usize) -> (Vec<FamilyParams>, Vec<cover::RejectedNu>) {
        if let Some(nu) = &self.cfg.nu {
            let v = nu.clone().map(|s| Scalar::fp(f, s.to_fp(f)));
            return (vec![FamilyParams::new(v)], Vec::new());
        }
        let mut rng = rng_for(self.cfg.seed, f.p());
        let mut rejected = Vec::new();
        let nus = (0..count)
            .map(|_| {
                let (nu, rej) = cover::draw_generic_nu(f, &mut rng);
                rejected.extend(rej);
                nu
            })
            .collect();
        (nus, rejected)
    }

    /// ν over ℚ for the symbolic checks.
    pub fn rational_nu(&self) -> FamilyParams {
        match &self.cfg.nu {
            Some(nu) => FamilyParams::new(nu.clone()),
            None => sample_nu(),
        }
    }
}

pub type CheckFn = fn(&Context) -> CheckReport;

pub struct CheckSpec {
    pub id: &'static str,
    pub description: &'static str,
    pub topic: &'static str,
    pub run: CheckFn,
}

impl CheckSpec {
    pub fn module(&self) -> &'static str {
        self.id.split('.').next().unwrap_or("")
    }
}

/// Merge per-prime or per-draw reports into one record under `id`.
pub fn combine(id: &str, parts: Vec<CheckReport>) -> CheckReport {
    let status = if parts.iter().all(|r| r.status == Status::Pass) {
        Status::Pass
    } else if parts.iter().any(|r| r.status == Status::Fail) {
        Status::Fail
    } else if parts.iter().any(|r| r.status == Status::Unstable) {
        Status::Unstable
    } else {
        Status::Skipped
    };
    let mut primes: Vec<u64> = parts.iter().flat_map(|r| r.params.primes.clone()).collect();
    primes.sort_unstable();
    primes.dedup();
    let witness = json!(parts
        .iter()
        .map(|r| json!({"status": r.status, "params": r.params, "witness": r.witness}))
        .collect::<Vec<_>>());
    CheckReport { id: id.into(), status, witness, wall_ms: 0, params: Params { primes, ..Default::default() } }
}

fn per_prime(ctx: &Context, id: &str, f: impl Fn(PrimeField) -> CheckReport + Sync) -> CheckReport {
    use rayon::prelude::*;
    let parts: Vec<CheckReport> = ctx
        .fields
        .par_iter()
        .map(|p| {
            let mut r = f(*p);
            if r.params.primes.is_empty() {
                r.params.primes = vec![p.p()];
            }
            r
        })
        .collect();
    combine(id, parts)
}

fn with_seed(mut r: CheckReport, ctx: &Context) -> CheckReport {
    r.params.seed = Some(ctx.cfg.seed);
    r
}

fn free_action(ctx: &Context) -> CheckReport {
    let group = &ctx.group().0;
    let mut parts = Vec::new();
    let mut rejected = Vec::new();
    for f in &ctx.fields {
        let (nus, rej) = ctx.nus_logged(*f, ctx.cfg.draws);
        rejected.extend(rej.into_iter().map(|r| json!({"prime": f.p(), "rejected": r})));
        for nu in nus {
            let eq = SurfaceEquations::new(*f, &nu);
            let mut r = cover::certify_free_and_smooth(&eq, &nu, group);
            if !r.passed() {
                if let serde_json::Value::Object(m) = &mut r.witness {
                    m.insert("nu_degenerate".into(), json!(nu.degenerate()));
                }
            }
            parts.push(r);
        }
    }
    let mut r = combine("cover.free_action", parts);
    r.witness = json!({"draws": r.witness, "rejected_singular_nu": rejected});
    with_seed(r, ctx)
}

fn first_surface(ctx: &Context, f: PrimeField) -> (FamilyParams, SurfaceEquations) {
    let nu = ctx.nus(f, 1).remove(0);
    let eq = SurfaceEquations::new(f, &nu);
    (nu, eq)
}

fn parameter_map(ctx: &Context) -> CheckReport {
    let mut parts = Vec::new();
    match burniat::burniat_parameter_map(&ctx.cfg.lambda) {
        Ok((_, r)) => parts.push(r),
        Err(e) => return CheckReport::new("burniat.parameter_map", false, json!({"error": e.to_string()})),
    }
    for f in &ctx.fields {
        let Some(l) = ctx.cfg.lambda.try_to_fp(*f) else { continue };
        if l <= 1 || !f.is_square(f.neg(l)) {
            continue;
        }
        match burniat::burniat_parameter_map(&Scalar::fp(*f, l)) {
            Ok((_, mut r)) => {
                r.params.primes = vec![f.p()];
                parts.push(r);
            }
            Err(e) => parts.push(CheckReport::new("burniat.parameter_map", false, json!({"error": e.to_string()}))),
        }
    }
    let mut r = combine("burniat.parameter_map", parts);
    r.params.lambda = Some(ctx.cfg.lambda.to_string());
    r
}

pub static REGISTRY: &[CheckSpec] = &[
    CheckSpec { id: "unproj.census", topic: "ideal J", description: "J has 3 quadrics, 32 cubics, 28 quartics; σ♯ kills every generator", run: |_| unproj::verify_census() },
    CheckSpec { id: "unproj.x_ideal", topic: "ideal J", description: "X is cut out by three quadrics in P^7", run: |_| unproj::verify_x_ideal() },
    CheckSpec { id: "unproj.phi_consistency", topic: "unprojection", description: "the rational functions φ_k agree across their representations", run: |_| unproj::verify_phi_consistency() },
    CheckSpec { id: "unproj.quartic_witness", topic: "unprojection", description: "quartic relations y·y = monomial hold on X", run: |_| unproj::verify_quartic_witnesses() },
    CheckSpec { id: "unproj.plane_incidence", topic: "singular lines", description: "24 line pairs of rank 6 and 4 empty pairs of rank 8", run: |_| unproj::verify_plane_incidences() },
    CheckSpec { id: "unproj.jacobian_minor", topic: "singularities of V", description: "the 8 Jacobian minors equal ±y^11", run: |_| unproj::verify_jacobian_minor() },
    CheckSpec { id: "unproj.veronese_chart", topic: "singularities of V", description: "local Veronese cone at the y-coordinate points", run: |_| unproj::verify_veronese_chart() },
    CheckSpec { id: "unproj.elimination_cubic", topic: "ideal of T", description: "elimination cubic relating y and l, sign convention recorded", run: |_| unproj::verify_elimination_cubic() },
    CheckSpec { id: "unproj.t_ideal", topic: "ideal of T", description: "T-ideal has 65 generators and is homogeneous", run: |_| unproj::verify_t_ideal() },
    CheckSpec { id: "grouprep.generators", topic: "group action", description: "the six signed generators are commuting involutions", run: |_| grouprep::verify_table1() },
    CheckSpec { id: "grouprep.subgroups", topic: "group action", description: "G, H and the three θ classes", run: |_| grouprep::verify_subgroups() },
    CheckSpec { id: "grouprep.regular_rep", topic: "group action", description: "characters on x, y and S^2: regular representation", run: |_| grouprep::check_regular_representation() },
    CheckSpec { id: "grouprep.fixed_loci", topic: "group action", description: "linear fixed loci per sector", run: |_| grouprep::verify_fixed_loci() },
    CheckSpec {
        id: "grouprep.q_invariance",
        topic: "group action",
        description: "q(ν) is H-invariant for random ν",
        run: |ctx| with_seed(per_prime(ctx, "grouprep.q_invariance", |f| grouprep::verify_q_invariance(f, &ctx.nus(f, 3))), ctx),
    },
    CheckSpec { id: "grouprep.degenerate_delta", topic: "group action", description: "the degenerate δ set is {±8ε}", run: |ctx| per_prime(ctx, "grouprep.degenerate_delta", grouprep::verify_degenerate_delta) },
    CheckSpec {
        id: "grouprep.free_action",
        topic: "group action",
        description: "G acts on T(F_q) without fixed points",
        run: |ctx| {
            with_seed(
                per_prime(ctx, "grouprep.free_action", |f| {
                    let (_, eq) = first_surface(ctx, f);
                    grouprep::verify_free_action_downstairs(f, &t_points(&eq))
                }),
                ctx,
            )
        },
    },
    CheckSpec { id: "cover.sigma", topic: "cover", description: "σ, deck involution and Z1", run: |_| cover::verify_sigma() },
    CheckSpec { id: "cover.z2", topic: "cover", description: "Z2 = 2σ♯(q) and its closed form", run: |_| cover::verify_z2() },
    CheckSpec { id: "cover.lifts", topic: "cover", description: "lifts of the generators to (P^1)^4", run: |ctx| ctx.group().1.clone() },
    CheckSpec { id: "cover.group_structure", topic: "cover", description: "the lifted group is Z/2 × Q8", run: |_| cover::projaut::verify_group_structure() },
    CheckSpec { id: "cover.branch_structure", topic: "cover", description: "fixed points of the deck involution and Z1", run: |ctx| per_prime(ctx, "cover.branch_structure", cover::verify_branch_structure) },
    CheckSpec {
        id: "cover.enumeration",
        topic: "cover",
        description: "point enumeration: fast path equals naive, Y point counts",
        run: |ctx| {
            with_seed(
                per_prime(ctx, "cover.enumeration", |f| {
                    let (nu, eq) = first_surface(ctx, f);
                    cover::verify_enumeration(&eq, &nu)
                }),
                ctx,
            )
        },
    },
    CheckSpec { id: "cover.free_action", topic: "cover", description: "free action and smoothness on Z1 ∩ Z2", run: free_action },
    CheckSpec {
        id: "cover.orbit_closure",
        topic: "cover",
        description: "the lifted group preserves Z1 ∩ Z2",
        run: |ctx| {
            with_seed(
                per_prime(ctx, "cover.orbit_closure", |f| {
                    let (_, eq) = first_surface(ctx, f);
                    cover::verify_orbit_closure(&eq, &ctx.group().0)
                }),
                ctx,
            )
        },
    },
    CheckSpec { id: "cover.hplane_decomposition", topic: "cover", description: "coordinate hyperplane sections of Y", run: |ctx| cover::verify_hplane_decomposition(ctx.first_field()) },
    CheckSpec {
        id: "invariants.hilbert_t",
        topic: "invariants",
        description: "h_T(d) = 1, 7 and the plurigenera, stable over primes and ν",
        run: |ctx| invariants::verify_hilbert_t(&ctx.fields, 3, ctx.cfg.max_degree, ctx.cfg.seed),
    },
    CheckSpec { id: "invariants.hilbert_x", topic: "invariants", description: "h_X matches three quadrics in P^7 up to degree 6", run: |ctx| invariants::verify_hilbert_x(&ctx.fields, 6) },
    CheckSpec {
        id: "invariants.hilbert_yv",
        topic: "invariants",
        description: "h_Y equals dim σ♯(forms); h_V(1) = 7",
        run: |ctx| invariants::verify_hilbert_yv(ctx.first_field(), ctx.cfg.max_degree.min(4)),
    },
    CheckSpec { id: "invariants.intersection", topic: "invariants", description: "deg Y, −K_V^3 and K_T^2 from the ring of (P^1)^4", run: |_| invariants::verify_intersections() },
    CheckSpec {
        id: "bicanon.s3_derivation",
        topic: "bicanonical image",
        description: "squaring identity for the cubic S3",
        run: |ctx| bicanon::verify_s3_derivation(&ctx.fields, 20, ctx.cfg.seed),
    },
    CheckSpec {
        id: "bicanon.s3_point_images",
        topic: "bicanonical image",
        description: "all T(F_q) points map onto S3",
        run: |ctx| {
            with_seed(
                per_prime(ctx, "bicanon.s3_point_images", |f| {
                    let (nu, eq) = first_surface(ctx, f);
                    bicanon::verify_s3_point_images(&eq, &nu, &t_points(&eq))
                }),
                ctx,
            )
        },
    },
    CheckSpec { id: "bicanon.nodes", topic: "bicanonical image", description: "three ordinary double points n_i", run: |ctx| bicanon::verify_nodes(&ctx.fields, 100, ctx.cfg.seed) },
    CheckSpec { id: "bicanon.plane_sections", topic: "bicanonical image", description: "s0 + s_i = 0 cuts S3 in L_i + C_i; N_ij lie on S3", run: |ctx| bicanon::split_plane_sections(&ctx.rational_nu()) },
    CheckSpec {
        id: "bicanon.branch_loci",
        topic: "bicanonical image",
        description: "fixed points of the θ_i words map to the stated loci",
        run: |ctx| {
            let f = ctx.first_field();
            // Node fibres are not always F_p-rational, so allow extra draws.
            let draws: Vec<_> = ctx.nus(f, 40).into_iter().map(|nu| (SurfaceEquations::new(f, &nu), nu)).collect();
            with_seed(bicanon::verify_branch_loci(&draws, ctx.cfg.draws.min(draws.len())), ctx)
        },
    },
    CheckSpec { id: "burniat.nodes", topic: "Burniat pencil", description: "the 24 nodes of the torus chart", run: |_| burniat::verify_nodes() },
    CheckSpec { id: "burniat.charts", topic: "Burniat pencil", description: "ξ2 and ζ2 land in V; pullbacks give F1 and F2", run: |_| burniat::verify_charts() },
    CheckSpec { id: "burniat.f3", topic: "Burniat pencil", description: "F3 partials have no common zero on x00 = 0", run: |_| burniat::verify_f3() },
    CheckSpec { id: "burniat.lambda_identity", topic: "Burniat pencil", description: "plane-model cubic identity in Q[λ, u]", run: |_| burniat::verify_lambda_identity() },
    CheckSpec { id: "burniat.parameter_map", topic: "Burniat pencil", description: "λ → ν with the matching ν4 normalization", run: parameter_map },
    CheckSpec {
        id: "burniat.pencil_singularities",
        topic: "Burniat pencil",
        description: "singular points of pencil members lie over ξ2 of the 24 nodes",
        run: |ctx| {
            with_seed(
                per_prime(ctx, "burniat.pencil_singularities", |f| {
                    burniat::verify_pencil_singularities(f, &burniat::draw_pencil_nu(f, ctx.cfg.seed))
                }),
                ctx,
            )
        },
    },
];

/// Module order used by `run all`.
pub const MODULE_ORDER: [&str; 6] = ["unproj", "grouprep", "cover", "invariants", "bicanon", "burniat"];

/// Resolves an id, a module name or `all`; `bicanon.X` also finds `burniat.X`.
pub fn select(target: &str) -> Result<Vec<&'static CheckSpec>, ConfigError> {
    if target == "all" {
        return Ok(REGISTRY.iter().collect());
    }
    let modules: Vec<&str> = if target == "bicanon" { vec!["bicanon", "burniat"] } else { vec![target] };
    let by_module: Vec<_> = REGISTRY.iter().filter(|c| modules.contains(&c.module())).collect();
    if !by_module.is_empty() {
        return Ok(by_module);
    }
    if let Some(c) = REGISTRY.iter().find(|c| c.id == target) {
        return Ok(vec![c]);
    }
    if let Some(rest) = target.strip_prefix("bicanon.") {
        if let Some(c) = REGISTRY.iter().find(|c| c.id == format!("burniat.{rest}")) {
            return Ok(vec![c]);
        }
    }
    Err(ConfigError::UnknownCheck(target.into()))
}

pub fn run_check(spec: &CheckSpec, ctx: &Context) -> CheckReport {
    let mut r = timed(|| (spec.run)(ctx));
    if ctx.cfg.deterministic {
        r.wall_ms = 0;
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn selection() {
        assert_eq!(select("bicanon.lambda_identity").unwrap()[0].id, "burniat.lambda_identity");
        assert_eq!(select("cover.free_action").unwrap().len(), 1);
        assert!(select("bicanon").unwrap().len() > 6);
        assert!(select("nope").is_err());
        let ids: std::collections::BTreeSet<_> = REGISTRY.iter().map(|c| c.id).collect();
        assert_eq!(ids.len(), REGISTRY.len());
        assert!(REGISTRY.iter().all(|c| MODULE_ORDER.contains(&c.module())));
    }

    #[test]
    fn config_validation() {
        let cfg = RunConfig { primes: vec![5], ..Default::default() };
        assert_eq!(cfg.validate(), Err(ConfigError::PrimeTooSmall(5)));
        let cfg = RunConfig { primes: vec![13, 19], ..Default::default() };
        assert_eq!(cfg.validate(), Err(ConfigError::PrimeNotOneMod4(19)));
        let cfg = RunConfig { primes: vec![13, 21], ..Default::default() };
        assert!(matches!(cfg.validate(), Err(ConfigError::BadPrime(21, _))));
        assert!(RunConfig::default().validate().is_ok());
    }
}
