//! Verification suites: each check records the claim, the observed value and
//! the expected value, tagged with the acceptance criterion it supports.

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;
use std::sync::OnceLock;
use std::time::Instant;

use serde::Serialize;
use serde_json::{json, Value};
use thiserror::Error;

use crate::compfactor::{
    canonical, enumerate_composition_factors, enumerate_oriented_maps, exponentiate,
    is_composition_factor, isotropy, orbit_decomposition, MultFactor, Norm, Side,
};
use crate::fano::{
    all_collineations, canonical_tau, generated_subgroup, order7_minimal_polynomial,
    standard_generators, Collineation, Line, Point,
};
use crate::forms::forms_report;
use crate::g2::{bracket, classify_pair, delta_hat_census, orbit_census, IncidentPair, Orbit, G2};
use crate::lifting::{
    classify_delta_star, delta_star_fn, delta_star_properties, t_map, AugAut, AugGroup,
};
use crate::octonion::OctonionAlgebra;
use crate::radon::{image, kernel, r_set, r_star_set, t_line, PointFn, SignLineFn};
use crate::scalar::{
    has_sqrt_minus_one, FieldDescriptor, FieldVisitor, Fp, Gaussian, Rational, Scalar,
    ScalarError,
};

/// Suite names in report order.
pub const SUITES: [&str; 7] = ["fano", "compfactor", "radon", "octonion", "lifting", "g2", "forms"];

/// The multiplication table of `O_F` for the canonical factor: row `e_a`
/// lists `e_a · 1, e_a · e_1, …, e_a · e_7`.
pub const REFERENCE_TABLE: [&str; 8] = [
    "1 e1 e2 e3 e4 e5 e6 e7",
    "e1 -1 e4 e7 -e2 e6 -e5 -e3",
    "e2 -e4 -1 e5 e1 -e3 e7 -e6",
    "e3 -e7 -e5 -1 e6 e2 -e4 e1",
    "e4 e2 -e1 -e6 -1 e7 e3 -e5",
    "e5 -e6 e3 -e2 -e7 -1 e1 e4",
    "e6 e5 -e7 e4 -e3 -e1 -1 e2",
    "e7 e3 e6 -e1 e5 -e4 -e2 -1",
];

#[derive(Debug, Error)]
pub enum CertifyError {
    #[error("unknown suite `{0}`; expected one of {suites}, all", suites = SUITES.join(", "))]
    UnknownSuite(String),
    #[error(transparent)]
    Field(#[from] ScalarError),
    #[error("{0}")]
    Computation(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Check {
    pub id: String,
    pub criterion: u8,
    /// The claim being checked.
    pub anchor: String,
    pub observed: Value,
    pub expected: Value,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub suite: String,
    pub pass: bool,
    pub checks: Vec<Check>,
    /// Only reported with `--timing`, so default output is byte-stable.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_ms: Option<u128>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Report {
    pub field: String,
    pub pass: bool,
    pub checks: usize,
    pub failed: usize,
    pub suites: Vec<SuiteResult>,
}

#[derive(Clone, Debug)]
pub struct VerifyOptions {
    pub cache_dir: Option<PathBuf>,
    pub field: FieldDescriptor,
    pub timing: bool,
}

impl Default for VerifyOptions {
    fn default() -> Self {
        VerifyOptions {
            cache_dir: None,
            field: FieldDescriptor::Rational,
            timing: false,
        }
    }
}

/// Shared, lazily built state for the suites.
pub struct Context {
    opts: VerifyOptions,
    alg: OctonionAlgebra,
    g2: OnceLock<G2<Rational>>,
    group: OnceLock<Result<AugGroup, String>>,
}

impl Context {
    pub fn new(opts: VerifyOptions) -> Self {
        Context {
            opts,
            alg: OctonionAlgebra::canonical(),
            g2: OnceLock::new(),
            group: OnceLock::new(),
        }
    }

    pub fn algebra(&self) -> &OctonionAlgebra {
        &self.alg
    }

    pub fn g2(&self) -> &G2<Rational> {
        self.g2.get_or_init(G2::new)
    }

    /// The 1344-element group, from the cache directory when one is set.
    pub fn group(&self) -> Result<&AugGroup, CertifyError> {
        self.group
            .get_or_init(|| {
                let r = match &self.opts.cache_dir {
                    Some(dir) => AugGroup::load_or_build(dir, &self.alg),
                    None => AugGroup::enumerate(&self.alg),
                };
                r.map_err(|e| e.to_string())
            })
            .as_ref()
            .map_err(|e| CertifyError::Computation(e.clone()))
    }
}

struct Checks(Vec<Check>);

impl Checks {
    fn add(&mut self, id: &str, criterion: u8, anchor: &str, observed: Value, expected: Value) {
        let pass = observed == expected;
        self.0.push(Check {
            id: id.to_string(),
            criterion,
            anchor: anchor.to_string(),
            observed,
            expected,
            pass,
        });
    }
}

fn err<E: std::fmt::Display>(e: E) -> CertifyError {
    CertifyError::Computation(e.to_string())
}

pub fn run_suite(name: &str, ctx: &Context) -> Result<SuiteResult, CertifyError> {
    let start = Instant::now();
    let mut c = Checks(Vec::new());
    match name {
        "fano" => fano_suite(&mut c),
        "compfactor" => compfactor_suite(&mut c),
        "radon" => radon_suite(&mut c),
        "octonion" => octonion_suite(&mut c, ctx)?,
        "lifting" => lifting_suite(&mut c, ctx)?,
        "g2" => g2_suite(&mut c, ctx)?,
        "forms" => forms_suite(&mut c, ctx)?,
        other => return Err(CertifyError::UnknownSuite(other.to_string())),
    }
    Ok(SuiteResult {
        suite: name.to_string(),
        pass: c.0.iter().all(|k| k.pass),
        checks: c.0,
        wall_ms: ctx.opts.timing.then(|| start.elapsed().as_millis()),
    })
}

/// Runs the named suite, or every suite for `all`, in parallel.
pub fn verify(name: &str, opts: &VerifyOptions) -> Result<Report, CertifyError> {
    let names: Vec<&str> = if name == "all" {
        SUITES.to_vec()
    } else if SUITES.contains(&name) {
        vec![name]
    } else {
        return Err(CertifyError::UnknownSuite(name.to_string()));
    };
    // Validate the field before spawning any work.
    opts.field.visit(Probe)?;
    let ctx = Context::new(opts.clone());
    let results: Vec<Result<SuiteResult, CertifyError>> = std::thread::scope(|s| {
        let handles: Vec<_> = names
            .iter()
            .map(|n| {
                let ctx = &ctx;
                s.spawn(move || run_suite(n, ctx))
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().unwrap_or_else(|_| Err(CertifyError::Computation("suite panicked".into()))))
            .collect()
    });
    let suites = results.into_iter().collect::<Result<Vec<_>, _>>()?;
    let checks = suites.iter().map(|s| s.checks.len()).sum();
    let failed = suites
        .iter()
        .flat_map(|s| &s.checks)
        .filter(|c| !c.pass)
        .count();
    Ok(Report {
        field: opts.field.to_string(),
        pass: failed == 0,
        checks,
        failed,
        suites,
    })
}

struct Probe;
impl FieldVisitor for Probe {
    type Output = ();
    fn visit<S: Scalar>(self) {}
}

/// Human-readable rendering of a report.
pub fn render_text(r: &Report) -> String {
    let mut out = String::new();
    for s in &r.suites {
        let timing = s.wall_ms.map(|ms| format!(", {ms} ms")).unwrap_or_default();
        out.push_str(&format!(
            "suite {}: {} ({} checks{timing})\n",
            s.suite,
            if s.pass { "PASS" } else { "FAIL" },
            s.checks.len()
        ));
        for c in &s.checks {
            out.push_str(&format!(
                "  {} [{}] {}: {}\n",
                if c.pass { "PASS" } else { "FAIL" },
                c.criterion,
                c.id,
                c.anchor
            ));
            if !c.pass {
                out.push_str(&format!("       observed {}\n       expected {}\n", c.observed, c.expected));
            }
        }
    }
    out.push_str(&format!(
        "{}: {}/{} checks passed over field {}\n",
        if r.pass { "PASS" } else { "FAIL" },
        r.checks - r.failed,
        r.checks,
        r.field
    ));
    out
}

// ---------------------------------------------------------------------------
// Suites

fn histogram(group: &[Collineation]) -> BTreeMap<u32, usize> {
    let mut h = BTreeMap::new();
    for g in group {
        *h.entry(g.order()).or_insert(0) += 1;
    }
    h
}

/// Conjugacy classes of the order-7 elements.
pub fn order7_classes() -> Vec<BTreeSet<Collineation>> {
    let group = all_collineations();
    let mut seen = BTreeSet::new();
    let mut classes = Vec::new();
    for g in group.iter().filter(|g| g.order() == 7) {
        if seen.contains(g) {
            continue;
        }
        let class: BTreeSet<Collineation> = group.iter().map(|h| g.conjugate_by(h)).collect();
        seen.extend(class.iter().copied());
        classes.push(class);
    }
    classes
}

fn fano_suite(c: &mut Checks) {
    let group = all_collineations();
    c.add("fano.group_order", 1, "the collineation group has 168 elements", json!(group.len()), json!(168));
    c.add(
        "fano.order_histogram",
        1,
        "element orders: 1 identity, 21 of order 2, 56 of order 3, 42 of order 4, 48 of order 7",
        json!(histogram(group)),
        json!({"1": 1, "2": 21, "3": 56, "4": 42, "7": 48}),
    );
    let (a, b) = standard_generators();
    let ab = a.compose(&b);
    let comm = ab.compose(&a.inverse()).compose(&b.inverse());
    c.add(
        "fano.generators",
        1,
        "a, b generate the group with a^2 = b^3 = (ab)^7 = [a,b]^4 = 1",
        json!([
            generated_subgroup(&[a, b]).len(),
            a.order(),
            b.order(),
            ab.order(),
            comm.order()
        ]),
        json!([168, 2, 3, 7, 4]),
    );
    let classes = order7_classes();
    c.add(
        "fano.order7_classes",
        2,
        "the order-7 elements form two conjugacy classes of 24",
        json!(classes.iter().map(BTreeSet::len).collect::<Vec<_>>()),
        json!([24, 24]),
    );
    let tags: Vec<BTreeSet<String>> = classes
        .iter()
        .map(|cl| {
            cl.iter()
                .map(|g| format!("{:?}", order7_minimal_polynomial(g).expect("order 7")))
                .collect()
        })
        .collect();
    let separated = tags.iter().all(|t| t.len() == 1) && tags[0] != tags[1];
    c.add(
        "fano.order7_minpoly",
        2,
        "the minimal polynomial over F2 separates the two classes",
        json!(separated),
        json!(true),
    );
    let tau = canonical_tau();
    let class_of = |g: &Collineation| classes.iter().position(|cl| cl.contains(g));
    let legendre_rule = (1..7).all(|k| {
        let same = class_of(&tau.pow(k)) == class_of(&tau);
        same == (crate::fano::legendre7(k) == Ok(1))
    });
    c.add(
        "fano.order7_legendre",
        2,
        "tau^k is conjugate to tau exactly when k is a square mod 7",
        json!(legendre_rule),
        json!(true),
    );
}

/// Exhaustive search over all 2^21 antisymmetric sign tables.
pub fn brute_force_composition_factors() -> Vec<MultFactor> {
    let n = Norm::trivial();
    (0u32..1 << 21)
        .map(MultFactor::from_key)
        .filter(|e| is_composition_factor(e, &n))
        .collect()
}

fn compfactor_suite(c: &mut Checks) {
    let all = enumerate_composition_factors();
    c.add("compfactor.count", 3, "there are 16 composition factors for the trivial norm", json!(all.len()), json!(16));
    let brute = brute_force_composition_factors();
    let same = brute.len() == all.len() && brute.iter().all(|e| all.iter().any(|f| f.eps() == e));
    c.add(
        "compfactor.exhaustive",
        3,
        "a search over all 2^21 sign tables finds the same 16 factors",
        json!([brute.len(), same]),
        json!([16, true]),
    );
    let sides: BTreeMap<String, usize> = all.iter().fold(BTreeMap::new(), |mut m, e| {
        *m.entry(e.side().to_string()).or_insert(0) += 1;
        m
    });
    c.add("compfactor.sides", 3, "eight factors on each side", json!(sides), json!({"O+": 8, "O-": 8}));
    let orbits = orbit_decomposition();
    c.add(
        "compfactor.orbits",
        3,
        "the group acts with two orbits of eight",
        json!(orbits.iter().map(Vec::len).collect::<Vec<_>>()),
        json!([8, 8]),
    );
    let eps = canonical();
    let iso = isotropy(&eps);
    c.add(
        "compfactor.isotropy",
        3,
        "the isotropy group of the canonical factor has 21 elements: 1, 14 of order 3, 6 of order 7",
        json!(histogram(&iso)),
        json!({"1": 1, "3": 14, "7": 6}),
    );
    let tau = canonical_tau();
    let cyclic: BTreeSet<Collineation> = (0..7).map(|k| tau.pow(k)).collect();
    let normalizer: Vec<Collineation> = all_collineations()
        .iter()
        .filter(|h| cyclic.contains(&tau.conjugate_by(h)))
        .copied()
        .collect();
    c.add(
        "compfactor.normalizer",
        3,
        "the isotropy group equals the normalizer of <tau>",
        json!(normalizer == iso),
        json!(true),
    );
    let maps = enumerate_oriented_maps();
    let images: BTreeSet<String> = maps
        .iter()
        .filter_map(|m| exponentiate(m).ok())
        .filter(|e| e.side() == Side::Plus)
        .map(|e| e.key_hex())
        .collect();
    c.add(
        "compfactor.oriented_maps",
        3,
        "the 8 oriented maps exponentiate bijectively onto one side",
        json!([maps.len(), images.len()]),
        json!([8, 8]),
    );
}

fn radon_suite(c: &mut Checks) {
    let k = kernel();
    let mut expected: BTreeSet<PointFn> = Line::ALL.iter().map(|&d| t_line(d)).collect();
    expected.insert(PointFn::ZERO);
    let k_set: BTreeSet<PointFn> = k.iter().copied().collect();
    c.add(
        "radon.kernel",
        4,
        "the kernel has 8 elements: 0 and the seven line indicators",
        json!([k.len(), k_set == expected]),
        json!([8, true]),
    );
    c.add("radon.image", 4, "the image has 16 elements", json!(image().len()), json!(16));
    c.add("radon.r", 4, "64 point sign functions have product 1", json!(r_set().len()), json!(64));
    c.add(
        "radon.r_star",
        4,
        "8 line sign functions have pencil products 1",
        json!(r_star_set().len()),
        json!(8),
    );
}

struct FieldNorm;
impl FieldVisitor for FieldNorm {
    type Output = bool;
    fn visit<S: Scalar>(self) -> bool {
        use crate::octonion::Octonion;
        let alg = OctonionAlgebra::canonical();
        // Basis products and a fixed element pair over the chosen field.
        let x: Octonion<S> = Octonion::from_i64([3, -1, 4, 1, -5, 9, 2, -6]);
        let y: Octonion<S> = Octonion::from_i64([2, 7, -1, 8, 2, -8, 1, 8]);
        alg.mul(&x, &y).norm() == x.norm() * y.norm()
    }
}

fn octonion_suite(c: &mut Checks, ctx: &Context) -> Result<(), CertifyError> {
    let alg = ctx.algebra();
    let table = alg.table();
    let rendered: Vec<String> = table
        .iter()
        .map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
        .collect();
    c.add(
        "octonion.table",
        14,
        "the multiplication table matches the reference table cell for cell",
        json!(rendered),
        json!(REFERENCE_TABLE),
    );
    let samples = 128;
    let norm = alg.norm_multiplicativity_check(samples, 0x5eed).map_err(err)?;
    c.add(
        "octonion.norm_random",
        14,
        "N(xy) = N(x)N(y) on random integer pairs and by the sign rules",
        json!([norm.samples, norm.structural]),
        json!([samples, true]),
    );
    c.add(
        "octonion.norm_symbolic",
        14,
        "N(xy) - N(x)N(y) vanishes as a polynomial",
        json!(alg.norm_multiplicativity_symbolic()),
        json!(true),
    );
    c.add(
        "octonion.norm_field",
        14,
        "norm multiplicativity over the selected field",
        json!(ctx.opts.field.visit(FieldNorm)?),
        json!(true),
    );
    let quats = Line::ALL.iter().filter(|&&d| alg.quaternion_subalgebra(d).is_ok()).count();
    c.add(
        "octonion.quaternions",
        14,
        "each line spans an associative quaternion subalgebra",
        json!(quats),
        json!(7),
    );
    let mut dims = BTreeSet::new();
    for (i, p) in Point::ALL.iter().enumerate() {
        for (j, q) in Point::ALL.iter().enumerate().skip(i + 1) {
            for r in Point::ALL.iter().skip(j + 1) {
                if !crate::fano::collinear(*p, *q, *r) {
                    dims.insert(alg.subalgebra_generated(&[*p, *q, *r]).map_err(err)?);
                }
            }
        }
    }
    c.add(
        "octonion.non_aligned",
        14,
        "every non-aligned triple generates the whole algebra",
        json!(dims),
        json!([8]),
    );
    Ok(())
}

fn lifting_suite(c: &mut Checks, ctx: &Context) -> Result<(), CertifyError> {
    let eps = canonical();
    let classes = classify_delta_star(&eps);
    c.add(
        "lifting.delta_star_classes",
        5,
        "delta* takes 8 values over the group, each 21 times",
        json!(classes.values().map(Vec::len).collect::<Vec<_>>()),
        json!(vec![21; 8]),
    );
    let props = delta_star_properties(&eps).map_err(err)?;
    c.add(
        "lifting.delta_star_properties",
        5,
        "det g = 1, pencil products 1, multiplier and quadrilateral identities",
        json!([
            props.determinant_one,
            props.pencil_products_one,
            props.multiplier_identity,
            props.quadrilateral_relation,
            props.pair_independent
        ]),
        json!([true, true, true, true, true]),
    );
    let (a, b) = standard_generators();
    let dp = |g: &Collineation| {
        delta_star_fn(g, &eps)
            .distinguished_point()
            .ok()
            .flatten()
            .map(|p| p.to_string())
    };
    c.add(
        "lifting.generator_points",
        5,
        "delta*(a,.) and delta*(b,.) have distinguished points P4 and P3",
        json!([dp(&a), dp(&b)]),
        json!(["P4", "P3"]),
    );
    c.add(
        "lifting.trivial_class",
        5,
        "the constant class of delta* is the isotropy group",
        json!(classes.get(&SignLineFn::ZERO) == Some(&isotropy(&eps))),
        json!(true),
    );
    let group = ctx.group()?;
    c.add("lifting.group_order", 6, "the covering group has 1344 elements", json!(group.len()), json!(1344));
    let mut kernel_expected: Vec<AugAut> = Line::ALL.iter().map(|&d| t_map(d)).collect();
    kernel_expected.push(AugAut::identity());
    kernel_expected.sort();
    c.add(
        "lifting.kernel",
        6,
        "the kernel of the projection is {Id} and the seven t_D",
        json!([group.kernel().len(), group.kernel() == kernel_expected.as_slice()]),
        json!([8, true]),
    );
    let fiber_sizes: BTreeSet<usize> = all_collineations().iter().map(|g| group.fiber(g).len()).collect();
    c.add("lifting.fibers", 6, "every fiber has 8 elements", json!(fiber_sizes), json!([8]));
    let mut profiles: BTreeMap<u32, BTreeSet<Vec<u32>>> = BTreeMap::new();
    for g in all_collineations() {
        profiles.entry(g.order()).or_default().insert(group.fiber_order_profile(g));
    }
    c.add(
        "lifting.fiber_profiles",
        6,
        "fiber element orders by base order certify the cover is not split",
        json!(profiles),
        json!({
            "1": [[1, 2, 2, 2, 2, 2, 2, 2]],
            "2": [[2, 2, 2, 2, 4, 4, 4, 4]],
            "3": [[3, 3, 3, 3, 6, 6, 6, 6]],
            "4": [[8, 8, 8, 8, 8, 8, 8, 8]],
            "7": [[7, 7, 7, 7, 7, 7, 7, 7]]
        }),
    );
    let chat: AugAut = "-4 2 6 1 7 5 -3".parse().map_err(err)?;
    c.add(
        "lifting.c_hat",
        6,
        "the lift -4 2 6 1 7 5 -3 lies in the group and has order 8",
        json!([group.contains(&chat), chat.order()]),
        json!([true, 8]),
    );
    Ok(())
}

struct FieldG2;
impl FieldVisitor for FieldG2 {
    type Output = (usize, Option<bool>);
    fn visit<S: Scalar>(self) -> (usize, Option<bool>) {
        let g = G2::<S>::new();
        (g.span_dimension(), g.chevalley_relations(Point::ALL[0]))
    }
}

fn g2_suite(c: &mut Checks, ctx: &Context) -> Result<(), CertifyError> {
    let g = ctx.g2();
    let pairs = IncidentPair::all();
    c.add("g2.dimension", 7, "the 21 generators span a 14-dimensional space", json!(g.span_dimension()), json!(14));
    let relations_hold = Point::ALL.iter().all(|&p| {
        p.lines()
            .iter()
            .fold(crate::g2::So7Elt::<Rational>::zero(), |acc, &d| {
                acc.add(&g.x(&IncidentPair::new(p, d).expect("incident")))
            })
            .is_zero()
    });
    c.add(
        "g2.point_relations",
        7,
        "the only relations are the seven point relations",
        json!([relations_hold, 21 - g.span_dimension()]),
        json!([true, 7]),
    );
    c.add(
        "g2.annihilator",
        7,
        "the annihilator of 1 in so(7) is the span of the generators",
        json!([g.annihilator_dim(), pairs.iter().all(|ip| g.is_g2(&g.x(ip)))]),
        json!([14, true]),
    );
    let (dim, chev) = ctx.opts.field.visit(FieldG2)?;
    c.add(
        "g2.field_dimension",
        7,
        "dimension 14 over the selected field",
        json!(dim),
        json!(14),
    );
    c.add(
        "g2.action_on_basis",
        8,
        "the closed-form action on basis octonions matches the spinor matrices",
        json!(g.check_action_on_basis().is_ok()),
        json!(true),
    );
    let mut law = 0;
    let mut paths = 0;
    for a in &pairs {
        for b in &pairs {
            let (xa, xb) = (g.x(a), g.x(b));
            let z = bracket(&xa, &xb);
            law += (z == g.bracket_law(a, b)) as usize;
            paths += (g.spinor(&z) == g.x_spinor(a).commutator(g.x_spinor(b))) as usize;
        }
    }
    c.add(
        "g2.bracket_law",
        8,
        "all 441 brackets match the case formulas and the spinor commutators",
        json!([law, paths]),
        json!([441, 441]),
    );
    let ip = |s: &str| s.parse::<IncidentPair>().expect("valid pair");
    c.add(
        "g2.bracket_anchors",
        8,
        "[X(P1,D1), X(P3,D7)] = -X(P7,D7) and [X(P4,D1), X(P5,D2)] = -X(P7,D6)",
        json!([
            g.bracket_entry(&ip("(P1,D1)"), &ip("(P3,D7)")).to_string(),
            g.bracket_entry(&ip("(P4,D1)"), &ip("(P5,D2)")).to_string()
        ]),
        json!([
            "[X(P1,D1), X(P3,D7)] = −X(P7,D7), orbit O3",
            "[X(P4,D1), X(P5,D2)] = −X(P7,D6), orbit O4"
        ]),
    );
    let basis = g.basis();
    let mut jacobi = true;
    for x in &basis {
        for y in &basis {
            for z in &basis {
                jacobi &= bracket(x, &bracket(y, z))
                    .add(&bracket(y, &bracket(z, x)))
                    .add(&bracket(z, &bracket(x, y)))
                    .is_zero();
            }
        }
    }
    c.add("g2.jacobi", 8, "the Jacobi identity holds on all basis triples", json!(jacobi), json!(true));
    let census = orbit_census();
    c.add(
        "g2.orbit_census",
        9,
        "pairs of incident pairs fall into orbits of 21, 42, 42, 84, 84, 168",
        json!(census.sizes),
        json!({"D": 21, "O1": 42, "O2": 42, "O3": 84, "O3'": 84, "O4": 168}),
    );
    c.add(
        "g2.orbit_closure",
        9,
        "each class is a single orbit under the generators a, b",
        json!(census.single_orbits),
        json!(true),
    );
    let group = ctx.group()?;
    let dh = delta_hat_census(g, group).map_err(err)?;
    c.add(
        "g2.delta_hat",
        10,
        "delta over the covering group: 64 functions, each 21 times, in R, with Radon transform delta*",
        json!([
            dh.elements,
            dh.distinct_functions,
            dh.multiplicities,
            dh.products_one,
            dh.radon_matches_delta_star
        ]),
        json!([1344, 64, [21], true, true]),
    );
    let cartans: Vec<bool> = Point::ALL
        .iter()
        .map(|&p| {
            let r = g.cartan_report(p);
            r.dim == 2 && r.abelian && r.self_centralizing
        })
        .collect();
    c.add(
        "g2.cartan",
        11,
        "each h_P is 2-dimensional, abelian and self-centralizing",
        json!(cartans),
        json!(vec![true; 7]),
    );
    let d = g.decomposition_check();
    c.add(
        "g2.decomposition",
        11,
        "g2 is the orthogonal direct sum of the h_P with [h_P, h_Q] = h_{P+Q}",
        json!([d.dim_sum, d.direct, d.brackets_match, d.orthogonal]),
        json!([14, true, true, true]),
    );
    let lines: Vec<bool> = Line::ALL
        .iter()
        .map(|&l| {
            let r = g.line_subalgebra(l);
            r.dim == 6
                && r.closed
                && r.x_ideal_dim == 3
                && r.y_ideal_dim == 3
                && r.ideals_span
                && r.x_relations
                && r.y_relations
                && r.x_y_commute
                && r.stable_on_line
                && r.stable_off_line
                && r.x_trivial_on_line
        })
        .collect();
    c.add(
        "g2.line_subalgebras",
        11,
        "each g_D is two commuting 3-dimensional ideals with the stated brackets and invariant subspaces",
        json!(lines),
        json!(vec![true; 7]),
    );
    let points: Vec<Value> = Point::ALL
        .iter()
        .map(|&p| {
            let r = g.point_subalgebra(p);
            json!([r.dim, r.closed, r.annihilates_e_p])
        })
        .collect();
    c.add(
        "g2.point_subalgebras",
        11,
        "each s_P is closed of dimension 8 and kills e_P",
        json!(points),
        json!(vec![json!([8, true, true]); 7]),
    );
    let p1 = Point::ALL[0];
    c.add(
        "g2.chevalley",
        11,
        "sl(3) relations hold over Q(i) and F5; no sqrt(-1) over Q and F3",
        json!([
            G2::<Gaussian<Rational>>::new().chevalley_relations(p1),
            G2::<Fp<5>>::new().chevalley_relations(p1),
            g.chevalley_relations(p1),
            G2::<Fp<3>>::new().chevalley_relations(p1)
        ]),
        json!([true, true, null, null]),
    );
    let expected_chev = if has_sqrt_minus_one(&ctx.opts.field)? { Some(true) } else { None };
    c.add(
        "g2.field_chevalley",
        11,
        "sl(3) relations over the selected field exactly when it has sqrt(-1)",
        json!(chev),
        json!(expected_chev),
    );
    let ac: Vec<bool> = Point::ALL
        .iter()
        .map(|&p| {
            let r = g.almost_complex(p);
            r.squares_to_minus_one
                && r.isometry
                && r.commutes_with_s_p
                && r.annihilator_dim == 8
                && r.s_p_is_annihilator
        })
        .collect();
    c.add(
        "g2.almost_complex",
        11,
        "J is an s_P-invariant isometry with J^2 = -1",
        json!(ac),
        json!(vec![true; 7]),
    );
    let s = g.pair_generated_subalgebra(&ip("(P1,D1)"), &ip("(P7,D7)"));
    let y = g.y(&ip("(P1,D7)"));
    let central = s.contains(y.coeffs())
        && s.basis()
            .iter()
            .all(|v| bracket(&y, &crate::g2::So7Elt::from_coeffs(v.clone())).is_zero());
    c.add(
        "g2.o3_example",
        11,
        "X(P1,D1), X(P7,D7) generate a 4-dimensional algebra with Y(P1,D7) central",
        json!([s.dim(), central]),
        json!([4, true]),
    );
    let mut o4_dims = BTreeSet::new();
    for a in &pairs {
        for b in &pairs {
            if classify_pair(a, b) == Orbit::O4 {
                o4_dims.insert(g.pair_generated_subalgebra(a, b).dim());
            }
        }
    }
    c.add(
        "g2.o4_generated",
        11,
        "every O4 pair generates the full 14-dimensional algebra",
        json!(o4_dims),
        json!([14]),
    );
    let roots: Vec<Value> = Point::ALL
        .iter()
        .map(|&p| {
            let r = g.root_system(p);
            json!([r.count, r.short, r.long, r.in_cartan, r.pattern_matches])
        })
        .collect();
    c.add(
        "g2.root_system",
        12,
        "12 roots per point: 6 of length^2 2, 6 of length^2 6, in the G2 pattern",
        json!(roots),
        json!(vec![json!([12, 6, 6, true, true]); 7]),
    );
    Ok(())
}

fn forms_suite(c: &mut Checks, ctx: &Context) -> Result<(), CertifyError> {
    let r = forms_report(ctx.g2()).map_err(err)?;
    c.add(
        "forms.terms",
        13,
        "omega and Omega have 7 ordering-independent terms",
        json!([r.omega_terms, r.big_omega_terms]),
        json!([7, 7]),
    );
    c.add(
        "forms.invariance",
        13,
        "g2 kills omega and Omega; invariant 3-forms are 1-dimensional",
        json!([r.omega_invariant, r.big_omega_invariant, r.invariant_3form_dim]),
        json!([true, true, 1]),
    );
    c.add(
        "forms.contraction",
        13,
        "i_v omega ^ i_w omega ^ omega = -6 B(v,w) vol on basis pairs",
        json!(r.contraction_identity),
        json!(true),
    );
    c.add("forms.wedge", 13, "Omega ^ omega = -7 vol", json!(r.wedge_constant), json!(-7));
    c.add(
        "forms.normalization",
        13,
        "with sorted subsets orthonormal, <omega,omega> = <Omega,Omega> = 7",
        json!([r.omega_norm, r.big_omega_norm]),
        json!([7, 7]),
    );
    Ok(())
}
