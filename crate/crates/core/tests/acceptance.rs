//! Acceptance criteria 1 through 14.
//!
//! Each criterion compares the library against an oracle built here from
//! first principles: point masks in F2^3, a frozen copy of the octonion
//! multiplication table, brute-force group enumeration and exact rational
//! linear algebra. `acceptance_summary` prints one PASS/FAIL line per
//! criterion.

use std::collections::{BTreeMap, BTreeSet};
use std::sync::OnceLock;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::{Rng, SeedableRng};

use fano_g2::compfactor::{canonical, enumerate_composition_factors, isotropy, CompositionFactor};
use fano_g2::fano::{all_collineations, legendre7, order7_minimal_polynomial, Collineation, Line, Point};
use fano_g2::forms::{big_omega, forms_report, omega};
use fano_g2::g2::{classify_pair, delta_hat_census, IncidentPair, G2};
use fano_g2::lifting::{delta_star_fn, delta_star_properties, AugAut, AugGroup};
use fano_g2::octonion::{Octonion, OctonionAlgebra, SignedBasis};
use fano_g2::radon::{image, kernel, r_set, r_star_set, SignPointFn};
use fano_g2::scalar::{Fp, Gaussian, Rational};

type Q = BigRational;
type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        if !$cond {
            return Err(format!($($msg)+));
        }
    };
}

// ---------------------------------------------------------------------------
// Incidence geometry from masks.

/// `P_k` has coordinates `MASK[k-1]` in F2^3.
const MASK: [u8; 7] = [0b001, 0b010, 0b100, 0b011, 0b110, 0b111, 0b101];

fn point_of_mask(m: u8) -> usize {
    MASK.iter().position(|&x| x == m).expect("nonzero mask")
}

/// The third point on the line through two distinct points.
fn third(p: usize, q: usize) -> usize {
    point_of_mask(MASK[p] ^ MASK[q])
}

/// `D_i = {P_i, P_{i+1}, P_{i+3}}`, 0-based.
fn lines() -> [[usize; 3]; 7] {
    let mut out = [[0; 3]; 7];
    for (i, d) in out.iter_mut().enumerate() {
        *d = [i, (i + 1) % 7, (i + 3) % 7];
        assert_eq!(MASK[d[0]] ^ MASK[d[1]] ^ MASK[d[2]], 0, "D{} is not a line", i + 1);
    }
    out
}

fn on_line(p: usize, d: usize) -> bool {
    lines()[d].contains(&p)
}

fn line_of(pts: [usize; 3]) -> usize {
    let set: BTreeSet<usize> = pts.into_iter().collect();
    lines()
        .iter()
        .position(|d| d.iter().copied().collect::<BTreeSet<_>>() == set)
        .expect("points are collinear")
}

fn line_image(g: &Perm, d: usize) -> usize {
    let l = lines()[d];
    line_of([g[l[0]], g[l[1]], g[l[2]]])
}

/// A permutation of the points, 0-based: `g[p]` is the image of `P_{p+1}`.
type Perm = [usize; 7];

fn compose(g: &Perm, h: &Perm) -> Perm {
    std::array::from_fn(|p| g[h[p]])
}

fn inverse(g: &Perm) -> Perm {
    let mut out = [0; 7];
    for p in 0..7 {
        out[g[p]] = p;
    }
    out
}

fn order(g: &Perm) -> u32 {
    let id: Perm = std::array::from_fn(|p| p);
    let mut x = *g;
    let mut n = 1;
    while x != id {
        x = compose(g, &x);
        n += 1;
    }
    n
}

fn perm_from_labels(s: &str) -> Perm {
    let v: Vec<usize> = s.bytes().map(|b| (b - b'1') as usize).collect();
    v.try_into().expect("7 labels")
}

fn all_perms() -> Vec<Perm> {
    fn rec(prefix: &mut Vec<usize>, used: u8, out: &mut Vec<Perm>) {
        if prefix.len() == 7 {
            out.push(prefix.clone().try_into().unwrap());
            return;
        }
        for v in 0..7 {
            if used >> v & 1 == 0 {
                prefix.push(v);
                rec(prefix, used | 1 << v, out);
                prefix.pop();
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), 0, &mut out);
    out
}

/// Permutations sending every line to a line.
fn oracle_group() -> Vec<Perm> {
    all_perms()
        .into_iter()
        .filter(|g| {
            lines()
                .iter()
                .all(|d| MASK[g[d[0]]] ^ MASK[g[d[1]]] ^ MASK[g[d[2]]] == 0)
        })
        .collect()
}

fn library_perm(g: &Collineation) -> Perm {
    std::array::from_fn(|p| (g.perm()[p] - 1) as usize)
}

fn library_collineation(g: &Perm) -> Collineation {
    Collineation::new(std::array::from_fn(|p| g[p] as u8 + 1)).unwrap()
}

fn pt(p: usize) -> Point {
    Point::ALL[p]
}

fn ln(d: usize) -> Line {
    Line::ALL[d]
}

fn histogram<I: IntoIterator<Item = u32>>(it: I) -> BTreeMap<u32, usize> {
    let mut m = BTreeMap::new();
    for o in it {
        *m.entry(o).or_insert(0) += 1;
    }
    m
}

fn squares_mod7() -> BTreeSet<i64> {
    (1..7).map(|k| k * k % 7).collect()
}

// ---------------------------------------------------------------------------
// Frozen multiplication table: row `a`, column `b` is `e_a · e_b`, with
// `e_0 = 1`.

const FROZEN_TABLE: [&str; 8] = [
    "1 e1 e2 e3 e4 e5 e6 e7",
    "e1 -1 e4 e7 -e2 e6 -e5 -e3",
    "e2 -e4 -1 e5 e1 -e3 e7 -e6",
    "e3 -e7 -e5 -1 e6 e2 -e4 e1",
    "e4 e2 -e1 -e6 -1 e7 e3 -e5",
    "e5 -e6 e3 -e2 -e7 -1 e1 e4",
    "e6 e5 -e7 e4 -e3 -e1 -1 e2",
    "e7 e3 e6 -e1 e5 -e4 -e2 -1",
];

/// `(sign, index)` for every product of basis elements.
fn table() -> [[(i64, usize); 8]; 8] {
    let mut t = [[(0, 0); 8]; 8];
    for (a, row) in FROZEN_TABLE.iter().enumerate() {
        for (b, cell) in row.split_whitespace().enumerate() {
            let (sign, body) = match cell.strip_prefix('-') {
                Some(rest) => (-1, rest),
                None => (1, cell),
            };
            let idx = if body == "1" { 0 } else { body[1..].parse().unwrap() };
            t[a][b] = (sign, idx);
        }
    }
    t
}

fn oct_mul(x: &[i64; 8], y: &[i64; 8]) -> [i64; 8] {
    let t = table();
    let mut z = [0i64; 8];
    for a in 0..8 {
        for b in 0..8 {
            let (s, k) = t[a][b];
            z[k] += s * x[a] * y[b];
        }
    }
    z
}

fn oct_norm(x: &[i64; 8]) -> i64 {
    x.iter().map(|c| c * c).sum()
}

/// `ε(P, Q)` read from the table, 0-based points.
fn table_eps(p: usize, q: usize) -> i8 {
    let (s, k) = table()[p + 1][q + 1];
    assert_eq!(k, third(p, q) + 1, "table disagrees with incidence");
    s as i8
}

// ---------------------------------------------------------------------------
// Exact linear algebra over Q.

fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

fn to_q(rows: &[Vec<i64>]) -> Vec<Vec<Q>> {
    rows.iter().map(|r| r.iter().map(|&x| q(x)).collect()).collect()
}

/// Reduced row echelon form; returns the rows and pivot columns.
fn rref(mut m: Vec<Vec<Q>>) -> (Vec<Vec<Q>>, Vec<usize>) {
    let ncols = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..ncols {
        let Some(pr) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else { continue };
        m.swap(r, pr);
        let inv = m[r][c].recip();
        for x in m[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..ncols {
                    let v = &m[r][j] * &f;
                    m[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
        if r == m.len() {
            break;
        }
    }
    m.truncate(r);
    (m, pivots)
}

fn rank(rows: &[Vec<i64>]) -> usize {
    if rows.is_empty() {
        return 0;
    }
    rref(to_q(rows)).1.len()
}

/// An integer basis of `{x : rows · x = 0}`.
fn nullspace(rows: &[Vec<i64>], ncols: usize) -> Vec<Vec<i64>> {
    let (r, pivots) = if rows.is_empty() { (vec![], vec![]) } else { rref(to_q(rows)) };
    let free: Vec<usize> = (0..ncols).filter(|c| !pivots.contains(c)).collect();
    free.iter()
        .map(|&f| {
            let mut v = vec![Q::zero(); ncols];
            v[f] = Q::one();
            for (row, &p) in r.iter().zip(&pivots) {
                v[p] = -row[f].clone();
            }
            integerize(&v)
        })
        .collect()
}

fn integerize(v: &[Q]) -> Vec<i64> {
    let mut l = BigInt::one();
    for x in v {
        let d = x.denom();
        let (mut a, mut b) = (l.clone(), d.clone());
        while !b.is_zero() {
            let r = &a % &b;
            a = b;
            b = r;
        }
        l = &l / a.abs() * d;
    }
    v.iter()
        .map(|x| (x * Q::from_integer(l.clone())).to_integer().to_i64().expect("small"))
        .collect()
}

// ---------------------------------------------------------------------------
// 7×7 integer matrices on `e_1, …, e_7`; column `j` is the image of `e_{j+1}`.

type Mat = Vec<i64>;

fn mat_mul(a: &Mat, b: &Mat) -> Mat {
    let mut c = vec![0; 49];
    for i in 0..7 {
        for k in 0..7 {
            if a[i * 7 + k] != 0 {
                for j in 0..7 {
                    c[i * 7 + j] += a[i * 7 + k] * b[k * 7 + j];
                }
            }
        }
    }
    c
}

fn comm(a: &Mat, b: &Mat) -> Mat {
    let ab = mat_mul(a, b);
    let ba = mat_mul(b, a);
    ab.iter().zip(&ba).map(|(x, y)| x - y).collect()
}

fn lin(terms: &[(i64, &Mat)]) -> Mat {
    let mut out = vec![0; 49];
    for (c, m) in terms {
        for (o, x) in out.iter_mut().zip(m.iter()) {
            *o += c * x;
        }
    }
    out
}

fn transpose(a: &Mat) -> Mat {
    (0..49).map(|k| a[(k % 7) * 7 + k / 7]).collect()
}

fn trace(a: &Mat) -> i64 {
    (0..7).map(|i| a[i * 8]).sum()
}

/// The 392 × 49 system whose solutions are derivations of the frozen table.
fn derivation_rows() -> Vec<Vec<i64>> {
    let t = table();
    let var = |r: usize, c: usize| (r - 1) * 7 + (c - 1);
    let mut rows = Vec::new();
    for a in 1..8 {
        for b in 1..8 {
            let mut comp = vec![vec![0i64; 49]; 8];
            let (s, m) = t[a][b];
            if m != 0 {
                for r in 1..8 {
                    comp[r][var(r, m)] += s;
                }
            }
            for r in 1..8 {
                let (s2, n2) = t[r][b];
                comp[n2][var(r, a)] -= s2;
                let (s3, n3) = t[a][r];
                comp[n3][var(r, b)] -= s3;
            }
            rows.extend(comp);
        }
    }
    rows
}

fn is_derivation(m: &Mat) -> bool {
    derivation_rows()
        .iter()
        .all(|row| row.iter().zip(m).map(|(a, b)| a * b).sum::<i64>() == 0)
}

/// Smallest matrix Lie algebra containing `gens`, as an echelon basis.
fn lie_closure(gens: &[Mat]) -> Vec<Mat> {
    let mut basis: Vec<Mat> = Vec::new();
    let push = |basis: &mut Vec<Mat>, m: Mat| {
        let mut trial = basis.clone();
        trial.push(m.clone());
        if rank(&trial) > basis.len() {
            basis.push(m);
            true
        } else {
            false
        }
    };
    for g in gens {
        push(&mut basis, g.clone());
    }
    loop {
        let mut grew = false;
        let snapshot = basis.clone();
        for a in &snapshot {
            for b in &snapshot {
                grew |= push(&mut basis, comm(a, b));
            }
        }
        if !grew {
            return basis;
        }
    }
}

fn span_eq(a: &[Mat], b: &[Mat]) -> bool {
    let ra = rank(a);
    let rb = rank(b);
    let both: Vec<Mat> = a.iter().chain(b).cloned().collect();
    ra == rb && rank(&both) == ra
}

// ---------------------------------------------------------------------------
// Shared state.

struct World {
    group: Vec<Perm>,
    g2: G2<Rational>,
    aug: AugGroup,
    /// `(g, signs)` with `e_P ↦ signs[P] e_{g(P)}` an automorphism.
    oracle_aug: Vec<(Perm, [i8; 7])>,
    /// A basis of the derivations of the frozen table.
    der: Vec<Mat>,
}

fn world() -> &'static World {
    static W: OnceLock<World> = OnceLock::new();
    W.get_or_init(|| {
        let group = oracle_group();
        let t = table();
        let mut oracle_aug = Vec::new();
        for g in &group {
            for bits in 0u8..128 {
                let s: [i8; 7] = std::array::from_fn(|p| if bits >> p & 1 == 1 { -1 } else { 1 });
                let img = |k: usize| -> (i64, usize) {
                    if k == 0 {
                        (1, 0)
                    } else {
                        (s[k - 1] as i64, g[k - 1] + 1)
                    }
                };
                let ok = (1..8).all(|a| {
                    (1..8).all(|b| {
                        let (sp, k) = t[a][b];
                        let (s1, k1) = img(k);
                        let (sa, ka) = img(a);
                        let (sb, kb) = img(b);
                        let (sab, kab) = t[ka][kb];
                        k1 == kab && sp * s1 == sa * sb * sab
                    })
                });
                if ok {
                    oracle_aug.push((*g, s));
                }
            }
        }
        let der = nullspace(&derivation_rows(), 49);
        let g2 = G2::new();
        let aug = AugGroup::enumerate(g2.algebra()).expect("covering group");
        World { group, g2, aug, oracle_aug, der }
    })
}

fn ip(p: usize, d: usize) -> IncidentPair {
    IncidentPair::new(pt(p), ln(d)).expect("incident")
}

fn incident_pairs() -> Vec<(usize, usize)> {
    (0..7).flat_map(|p| (0..7).filter(move |&d| on_line(p, d)).map(move |d| (p, d))).collect()
}

/// The library's `X_{P,D}` as a 7×7 matrix.
fn x_mat(p: usize, d: usize) -> Mat {
    so7_mat(&world().g2.x(&ip(p, d)))
}

fn so7_mat(x: &fano_g2::g2::So7Elt<Rational>) -> Mat {
    let m = x.vector_matrix();
    let mut out = vec![0; 49];
    for r in 1..8 {
        for c in 1..8 {
            out[(r - 1) * 7 + (c - 1)] = m.get(r, c).to_i64().expect("integer entry");
        }
        assert!(m.get(r, 0).to_i64() == Some(0) && m.get(0, r).to_i64() == Some(0));
    }
    out
}

// ---------------------------------------------------------------------------
// Criterion 1

fn criterion_1() -> Outcome {
    let w = world();
    ensure!(w.group.len() == 168, "oracle group has {} elements", w.group.len());
    let lib: BTreeSet<Perm> = all_collineations().iter().map(library_perm).collect();
    let ora: BTreeSet<Perm> = w.group.iter().copied().collect();
    ensure!(lib == ora, "library collineations differ from the brute-force group");
    let hist = histogram(w.group.iter().map(order));
    let want: BTreeMap<u32, usize> = [(1, 1), (2, 21), (3, 56), (4, 42), (7, 48)].into_iter().collect();
    ensure!(hist == want, "order histogram {hist:?}");
    let lib_hist = histogram(all_collineations().iter().map(|g| g.order()));
    ensure!(lib_hist == want, "library order histogram {lib_hist:?}");
    // a = 1274653 and b = 2746531 generate, with ab the shift i -> i+1.
    let a = perm_from_labels("1274653");
    let b = perm_from_labels("2746531");
    let tau: Perm = std::array::from_fn(|p| (p + 1) % 7);
    ensure!(compose(&a, &b) == tau, "ab is not the shift");
    let mut gen: BTreeSet<Perm> = [a].into_iter().collect();
    loop {
        let next: BTreeSet<Perm> = gen
            .iter()
            .flat_map(|x| [compose(&a, x), compose(&b, x)])
            .chain(gen.iter().copied())
            .collect();
        if next.len() == gen.len() {
            break;
        }
        gen = next;
    }
    ensure!(gen.len() == 168, "<a, b> has {} elements", gen.len());
    Ok(format!("168 elements, orders {hist:?}"))
}

// ---------------------------------------------------------------------------
// Criterion 2

fn criterion_2() -> Outcome {
    let w = world();
    let mut classes: Vec<BTreeSet<Perm>> = Vec::new();
    for g in w.group.iter().filter(|g| order(g) == 7) {
        if classes.iter().any(|c| c.contains(g)) {
            continue;
        }
        classes.push(w.group.iter().map(|h| compose(&compose(h, g), &inverse(h))).collect());
    }
    let sizes: Vec<usize> = classes.iter().map(BTreeSet::len).collect();
    ensure!(sizes == vec![24, 24], "order-7 class sizes {sizes:?}");
    let tags: Vec<BTreeSet<String>> = classes
        .iter()
        .map(|c| {
            c.iter()
                .map(|g| format!("{:?}", order7_minimal_polynomial(&library_collineation(g)).unwrap()))
                .collect()
        })
        .collect();
    ensure!(
        tags.iter().all(|t| t.len() == 1) && tags[0] != tags[1],
        "minimal polynomial tags do not separate the classes: {tags:?}"
    );
    let tau: Perm = std::array::from_fn(|p| (p + 1) % 7);
    let class_of = |g: &Perm| classes.iter().position(|c| c.contains(g));
    let squares = squares_mod7();
    let mut tk = tau;
    for k in 1..7i64 {
        let same = class_of(&tk) == class_of(&tau);
        ensure!(same == squares.contains(&k), "tau^{k}: conjugate to tau = {same}");
        let leg = legendre7(k).unwrap();
        ensure!((leg == 1) == squares.contains(&k), "legendre7({k}) = {leg}");
        tk = compose(&tau, &tk);
    }
    Ok("two classes of 24, separated by minimal polynomial and by squares mod 7".into())
}

// ---------------------------------------------------------------------------
// Criterion 3

type Table7 = [[i8; 7]; 7];

/// Checks `<xy, x'y'> + <xy', x'y> = 2<x,x'><y,y'>` on all basis quadruples,
/// which is norm multiplicativity polarized.
fn is_composition(eps: &Table7) -> bool {
    let prod = |a: usize, b: usize| -> (i8, usize) {
        match (a, b) {
            (0, _) => (1, b),
            (_, 0) => (1, a),
            _ if a == b => (-1, 0),
            _ => (eps[a - 1][b - 1], third(a - 1, b - 1) + 1),
        }
    };
    let ip = |x: (i8, usize), y: (i8, usize)| if x.1 == y.1 { (x.0 * y.0) as i32 } else { 0 };
    for a in 1..8 {
        for b in 1..8 {
            for c in 0..8 {
                for d in 0..8 {
                    let lhs = ip(prod(a, b), prod(c, d)) + ip(prod(a, d), prod(c, b));
                    let rhs = 2 * ((a == c) as i32) * ((b == d) as i32);
                    if lhs != rhs {
                        return false;
                    }
                }
            }
        }
    }
    true
}

fn eps_from_bits(bits: u32) -> Table7 {
    let mut t = [[0i8; 7]; 7];
    let mut k = 0;
    for p in 0..7 {
        for q in p + 1..7 {
            let s = if bits >> k & 1 == 1 { -1 } else { 1 };
            t[p][q] = s;
            t[q][p] = -s;
            k += 1;
        }
    }
    t
}

fn lib_table(e: &CompositionFactor) -> Table7 {
    std::array::from_fn(|p| std::array::from_fn(|q| if p == q { 0 } else { e.at(pt(p), pt(q)) }))
}

fn act_eps(g: &Perm, e: &Table7) -> Table7 {
    let gi = inverse(g);
    std::array::from_fn(|p| std::array::from_fn(|q| if p == q { 0 } else { e[gi[p]][gi[q]] }))
}

fn canonical_oracle_eps() -> Table7 {
    let sq = squares_mod7();
    std::array::from_fn(|i| {
        std::array::from_fn(|j| {
            if i == j {
                0
            } else if sq.contains(&((j as i64 - i as i64).rem_euclid(7))) {
                1
            } else {
                -1
            }
        })
    })
}

fn criterion_3() -> Outcome {
    let w = world();
    let found: BTreeSet<Table7> = (0u32..1 << 21)
        .map(eps_from_bits)
        .filter(is_composition)
        .collect();
    ensure!(found.len() == 16, "brute force finds {} composition factors", found.len());
    let lib: BTreeSet<Table7> = enumerate_composition_factors().iter().map(lib_table).collect();
    ensure!(lib == found, "library factors differ from brute force");
    let mut orbits: Vec<BTreeSet<Table7>> = Vec::new();
    for e in &found {
        if orbits.iter().any(|o| o.contains(e)) {
            continue;
        }
        orbits.push(w.group.iter().map(|g| act_eps(g, e)).collect());
    }
    let sizes: Vec<usize> = orbits.iter().map(BTreeSet::len).collect();
    ensure!(sizes == vec![8, 8], "orbit sizes {sizes:?}");
    let eps = canonical_oracle_eps();
    ensure!(lib_table(&canonical()) == eps, "canonical factor is not the Legendre table");
    let from_table: Table7 =
        std::array::from_fn(|p| std::array::from_fn(|q| if p == q { 0 } else { table_eps(p, q) }));
    ensure!(from_table == eps, "frozen table signs differ from the Legendre table");
    let iso: BTreeSet<Perm> = w.group.iter().filter(|g| act_eps(g, &eps) == eps).copied().collect();
    ensure!(iso.len() == 21, "isotropy has {} elements", iso.len());
    let tau: Perm = std::array::from_fn(|p| (p + 1) % 7);
    let mut cyc = BTreeSet::new();
    let mut x = tau;
    for _ in 0..7 {
        cyc.insert(x);
        x = compose(&tau, &x);
    }
    let normalizer: BTreeSet<Perm> = w
        .group
        .iter()
        .filter(|h| cyc.contains(&compose(&compose(h, &tau), &inverse(h))))
        .copied()
        .collect();
    ensure!(iso == normalizer, "isotropy differs from the normalizer of <tau>");
    let lib_iso: BTreeSet<Perm> = isotropy(&canonical()).iter().map(library_perm).collect();
    ensure!(lib_iso == iso, "library isotropy differs");
    Ok("16 factors by exhaustive search, orbits 8 + 8, isotropy 21 = normalizer".into())
}

// ---------------------------------------------------------------------------
// Criterion 4

fn criterion_4() -> Outcome {
    let ls = lines();
    for (d, l) in ls.iter().enumerate() {
        let lib: BTreeSet<usize> = ln(d).points().iter().map(|p| p.index()).collect();
        ensure!(lib == l.iter().copied().collect(), "line D{} differs", d + 1);
    }
    // Point functions as 7-bit masks; bit p is the value at P_{p+1}.
    let radon = |f: u8| -> u8 {
        (0..7).fold(0, |acc, d| acc | (ls[d].iter().map(|&p| f >> p & 1).sum::<u8>() & 1) << d)
    };
    let ker: BTreeSet<u8> = (0u8..128).filter(|&f| radon(f) == 0).collect();
    let mut expected: BTreeSet<u8> = ls
        .iter()
        .map(|l| 0x7f & !l.iter().fold(0u8, |m, &p| m | 1 << p))
        .collect();
    expected.insert(0);
    ensure!(ker == expected, "kernel {ker:?}");
    let lib_ker: BTreeSet<u8> = kernel()
        .iter()
        .map(|f| (0..7).fold(0, |m, p| m | f.at(pt(p)) << p))
        .collect();
    ensure!(lib_ker == ker, "library kernel differs");
    let img: BTreeSet<u8> = (0u8..128).map(radon).collect();
    ensure!(img.len() == 16, "image has {} elements", img.len());
    let lib_img: BTreeSet<u8> = image()
        .iter()
        .map(|f| (0..7).fold(0, |m, d| m | f.at(ln(d)) << d))
        .collect();
    ensure!(lib_img == img, "library image differs");
    let r: BTreeSet<u8> = (0u8..128).filter(|h| h.count_ones() % 2 == 0).collect();
    let lib_r: BTreeSet<u8> = r_set()
        .iter()
        .map(|h| (0..7).fold(0, |m, p| m | ((h.at(pt(p)) == -1) as u8) << p))
        .collect();
    ensure!(r.len() == 64 && lib_r == r, "|R| = {}", lib_r.len());
    let rs: BTreeSet<u8> = (0u8..128)
        .filter(|h| (0..7).all(|p| (0..7).filter(|&d| on_line(p, d) && h >> d & 1 == 1).count() % 2 == 0))
        .collect();
    let lib_rs: BTreeSet<u8> = r_star_set()
        .iter()
        .map(|h| (0..7).fold(0, |m, d| m | ((h.at(ln(d)) == -1) as u8) << d))
        .collect();
    ensure!(rs.len() == 8 && lib_rs == rs, "|R*| = {}", lib_rs.len());
    Ok("kernel 8, image 16, |R| = 64, |R*| = 8".into())
}

// ---------------------------------------------------------------------------
// Criterion 5

/// `ε(gP, gQ) ε(P, Q)` for `P, Q` on `D`, checked for every ordered pair.
fn oracle_delta_star(g: &Perm, d: usize) -> i8 {
    let eps = canonical_oracle_eps();
    let l = lines()[d];
    let mut vals = BTreeSet::new();
    for &p in &l {
        for &q in &l {
            if p != q {
                vals.insert(eps[g[p]][g[q]] * eps[p][q]);
            }
        }
    }
    assert_eq!(vals.len(), 1, "delta* depends on the pair");
    *vals.iter().next().unwrap()
}

fn distinguished_point(f: &[i8; 7]) -> Option<usize> {
    (0..7).find(|&p| (0..7).all(|d| (f[d] == 1) == on_line(p, d)))
}

fn criterion_5() -> Outcome {
    let w = world();
    let eps = canonical();
    let mut classes: BTreeMap<[i8; 7], usize> = BTreeMap::new();
    for g in &w.group {
        let f: [i8; 7] = std::array::from_fn(|d| oracle_delta_star(g, d));
        let lib = delta_star_fn(&library_collineation(g), &eps);
        ensure!(
            (0..7).all(|d| lib.at(ln(d)) == f[d]),
            "library delta* differs at {}",
            library_collineation(g)
        );
        for p in 0..7 {
            let prod: i8 = (0..7).filter(|&d| on_line(p, d)).map(|d| f[d]).product();
            ensure!(prod == 1, "pencil product at P{} is {prod}", p + 1);
        }
        *classes.entry(f).or_insert(0) += 1;
    }
    ensure!(classes.len() == 8, "{} distinct functions", classes.len());
    ensure!(classes.values().all(|&n| n == 21), "multiplicities {:?}", classes.values());
    // det over F2 of the linear map on masks.
    for g in &w.group {
        let cols: Vec<u8> = [0b001u8, 0b010, 0b100].iter().map(|&m| MASK[g[point_of_mask(m)]]).collect();
        let det = (0..3).fold(0u8, |acc, i| {
            let (j, k) = ((i + 1) % 3, (i + 2) % 3);
            let bit = |c: u8, r: usize| c >> r & 1;
            acc ^ (bit(cols[0], i) & (bit(cols[1], j) & bit(cols[2], k) ^ bit(cols[1], k) & bit(cols[2], j)))
        });
        ensure!(det == 1, "det g = {det}");
    }
    let props = delta_star_properties(&eps).map_err(|e| e.to_string())?;
    ensure!(props.determinant_one && props.pencil_products_one, "library properties {props:?}");
    let a = perm_from_labels("1274653");
    let b = perm_from_labels("2746531");
    let fa: [i8; 7] = std::array::from_fn(|d| oracle_delta_star(&a, d));
    let fb: [i8; 7] = std::array::from_fn(|d| oracle_delta_star(&b, d));
    ensure!(distinguished_point(&fa) == Some(3), "delta*(a,.) point {:?}", distinguished_point(&fa));
    ensure!(distinguished_point(&fb) == Some(2), "delta*(b,.) point {:?}", distinguished_point(&fb));
    Ok("8 functions x 21, pencil products 1, a -> P4, b -> P3".into())
}

// ---------------------------------------------------------------------------
// Criterion 6

type AugElt = (Perm, [i8; 7]);

fn aug_compose(x: &AugElt, y: &AugElt) -> AugElt {
    (compose(&x.0, &y.0), std::array::from_fn(|p| y.1[p] * x.1[y.0[p]]))
}

fn aug_order(x: &AugElt) -> u32 {
    let id: AugElt = (std::array::from_fn(|p| p), [1; 7]);
    let mut y = *x;
    let mut n = 1;
    while y != id {
        y = aug_compose(x, &y);
        n += 1;
    }
    n
}

fn library_aug(x: &AugAut) -> AugElt {
    let mut g = [0; 7];
    let mut s = [0; 7];
    for p in 0..7 {
        let img = x.apply(SignedBasis { sign: 1, index: p + 1 });
        g[p] = img.index - 1;
        s[p] = img.sign;
    }
    (g, s)
}

fn parse_aug(s: &str) -> AugElt {
    let mut g = [0; 7];
    let mut sg = [0; 7];
    for (p, tok) in s.split_whitespace().enumerate() {
        let v: i64 = tok.parse().unwrap();
        g[p] = v.unsigned_abs() as usize - 1;
        sg[p] = v.signum() as i8;
    }
    (g, sg)
}

fn criterion_6() -> Outcome {
    let w = world();
    ensure!(w.oracle_aug.len() == 1344, "oracle covering group has {}", w.oracle_aug.len());
    let ora: BTreeSet<AugElt> = w.oracle_aug.iter().copied().collect();
    let lib: BTreeSet<AugElt> = w.aug.elements().iter().map(library_aug).collect();
    ensure!(lib == ora, "library covering group differs");
    let id: Perm = std::array::from_fn(|p| p);
    let ker: BTreeSet<[i8; 7]> = w.oracle_aug.iter().filter(|x| x.0 == id).map(|x| x.1).collect();
    let mut want: BTreeSet<[i8; 7]> = lines()
        .iter()
        .map(|l| std::array::from_fn(|p| if l.contains(&p) { 1 } else { -1 }))
        .collect();
    want.insert([1; 7]);
    ensure!(ker == want, "kernel {ker:?}");
    ensure!(w.aug.kernel().len() == 8, "library kernel {}", w.aug.kernel().len());
    let mut profiles: BTreeMap<u32, BTreeSet<Vec<u32>>> = BTreeMap::new();
    for g in &w.group {
        let fiber: Vec<&AugElt> = w.oracle_aug.iter().filter(|x| x.0 == *g).collect();
        ensure!(fiber.len() == 8, "fiber of size {}", fiber.len());
        let mut prof: Vec<u32> = fiber.iter().map(|x| aug_order(x)).collect();
        prof.sort();
        ensure!(
            w.aug.fiber_order_profile(&library_collineation(g)) == prof,
            "library fiber profile differs"
        );
        profiles.entry(order(g)).or_default().insert(prof);
    }
    let want: BTreeMap<u32, BTreeSet<Vec<u32>>> = [
        (1, vec![1, 2, 2, 2, 2, 2, 2, 2]),
        (2, vec![2, 2, 2, 2, 4, 4, 4, 4]),
        (3, vec![3, 3, 3, 3, 6, 6, 6, 6]),
        (4, vec![8; 8]),
        (7, vec![7; 8]),
    ]
    .into_iter()
    .map(|(k, v)| (k, [v].into_iter().collect()))
    .collect();
    ensure!(profiles == want, "fiber profiles {profiles:?}");
    let c_hat = parse_aug("-4 2 6 1 7 5 -3");
    ensure!(ora.contains(&c_hat) && aug_order(&c_hat) == 8, "c-hat is not an order-8 element");
    Ok("1344 elements, kernel 8, fibers 8, profiles match, c-hat of order 8".into())
}

// ---------------------------------------------------------------------------
// Criterion 7

fn criterion_7() -> Outcome {
    let w = world();
    ensure!(w.der.len() == 14, "derivations have dimension {}", w.der.len());
    let xs: Vec<Mat> = incident_pairs().iter().map(|&(p, d)| x_mat(p, d)).collect();
    ensure!(xs.iter().all(is_derivation), "some X(P,D) is not a derivation");
    ensure!(span_eq(&xs, &w.der), "the X(P,D) do not span the derivations");
    // Relations among the 21 generators: columns are the flattened matrices.
    let rows: Vec<Vec<i64>> = (0..49).map(|k| xs.iter().map(|m| m[k]).collect()).collect();
    let rel = nullspace(&rows, 21);
    ensure!(rel.len() == 7, "{} independent relations", rel.len());
    let pairs = incident_pairs();
    let point_rel: Vec<Vec<i64>> = (0..7)
        .map(|p| pairs.iter().map(|&(q, _)| (q == p) as i64).collect())
        .collect();
    let both: Vec<Vec<i64>> = rel.iter().chain(&point_rel).cloned().collect();
    ensure!(rank(&point_rel) == 7 && rank(&both) == 7, "relations are not the point relations");
    // so(7) elements whose spinor action kills 1; spinor entries are halves.
    let cols: Vec<Vec<i64>> = (1..=7u8)
        .flat_map(|i| (i + 1..=7).map(move |j| (i, j)))
        .map(|(i, j)| {
            let m = w.g2.spinor(&fano_g2::g2::So7Elt::basis(i, j));
            (0..8).map(|r| { let x = m.get(r, 0); let n: BigInt = x.numer() * 2 / x.denom(); n.to_i64().unwrap() }).collect()
        })
        .collect();
    let rows: Vec<Vec<i64>> = (0..8).map(|r| cols.iter().map(|c| c[r]).collect()).collect();
    let ann = nullspace(&rows, 21);
    let ann_mats: Vec<Mat> = ann
        .iter()
        .map(|c| so7_mat(&fano_g2::g2::So7Elt::from_coeffs(c.iter().map(|&x| Rational::new(x, 1)).collect())))
        .collect();
    ensure!(ann.len() == 14 && span_eq(&ann_mats, &xs), "annihilator of 1 has dimension {}", ann.len());
    ensure!(w.g2.span_dimension() == 14, "library dimension {}", w.g2.span_dimension());
    Ok("dimension 14, exactly the 7 point relations, annihilator agrees".into())
}

// ---------------------------------------------------------------------------
// Criterion 8

fn criterion_8() -> Outcome {
    let w = world();
    let pairs = incident_pairs();
    let mut checked = 0;
    for &(p, d) in &pairs {
        for &(p2, d2) in &pairs {
            let (a, b) = (ip(p, d), ip(p2, d2));
            let c = comm(&x_mat(p, d), &x_mat(p2, d2));
            let e = w.g2.bracket_entry(&a, &b);
            let law = match e.target {
                Some(t) => {
                    let m = so7_mat(&w.g2.x(&t));
                    lin(&[(e.coefficient, &m)])
                }
                None => vec![0; 49],
            };
            ensure!(law == c, "bracket entry {e} disagrees with the matrix commutator");
            ensure!(so7_mat(&w.g2.bracket_law(&a, &b)) == c, "case formula disagrees at {a}, {b}");
            let z = fano_g2::g2::bracket(&w.g2.x(&a), &w.g2.x(&b));
            ensure!(so7_mat(&z) == c, "structure constants disagree at {a}, {b}");
            ensure!(
                w.g2.spinor(&z) == w.g2.x_spinor(&a).commutator(w.g2.x_spinor(&b)),
                "spinor commutator disagrees at {a}, {b}"
            );
            checked += 1;
        }
    }
    let e1 = w.g2.bracket_entry(&ip(0, 0), &ip(2, 6)).to_string();
    let e2 = w.g2.bracket_entry(&ip(3, 0), &ip(4, 1)).to_string();
    ensure!(e1 == "[X(P1,D1), X(P3,D7)] = −X(P7,D7), orbit O3", "anchor {e1}");
    ensure!(e2 == "[X(P4,D1), X(P5,D2)] = −X(P7,D6), orbit O4", "anchor {e2}");
    let basis = w.g2.basis();
    for x in &basis {
        for y in &basis {
            for z in &basis {
                let br = fano_g2::g2::bracket;
                let j = br(x, &br(y, z)).add(&br(y, &br(z, x))).add(&br(z, &br(x, y)));
                ensure!(j.is_zero(), "Jacobi fails");
            }
        }
    }
    Ok(format!("{checked} brackets by three paths, anchors, Jacobi on 14^3 triples"))
}

// ---------------------------------------------------------------------------
// Criterion 9

fn find(parent: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while parent[r] != r {
        r = parent[r];
    }
    parent[x] = r;
    r
}

fn pair_orbits(gens: &[Perm]) -> Vec<BTreeSet<(usize, usize)>> {
    let pairs = incident_pairs();
    let idx = |x: (usize, usize)| pairs.iter().position(|&y| y == x).unwrap();
    let n = pairs.len();
    let mut parent: Vec<usize> = (0..n * n).collect();
    for g in gens {
        for (i, &(p, d)) in pairs.iter().enumerate() {
            for (j, &(p2, d2)) in pairs.iter().enumerate() {
                let gi = idx((g[p], line_image(g, d)));
                let gj = idx((g[p2], line_image(g, d2)));
                let (a, b) = (find(&mut parent, i * n + j), find(&mut parent, gi * n + gj));
                parent[a] = b;
            }
        }
    }
    let mut orbits: BTreeMap<usize, BTreeSet<(usize, usize)>> = BTreeMap::new();
    for k in 0..n * n {
        let r = find(&mut parent, k);
        orbits.entry(r).or_default().insert((k / n, k % n));
    }
    orbits.into_values().collect()
}

fn criterion_9() -> Outcome {
    let w = world();
    let orbits = pair_orbits(&w.group);
    let mut sizes: Vec<usize> = orbits.iter().map(BTreeSet::len).collect();
    sizes.sort();
    ensure!(sizes == vec![21, 42, 42, 84, 84, 168], "orbit sizes {sizes:?}");
    let ab = pair_orbits(&[perm_from_labels("1274653"), perm_from_labels("2746531")]);
    let as_set = |o: &[BTreeSet<(usize, usize)>]| o.iter().cloned().collect::<BTreeSet<_>>();
    ensure!(as_set(&ab) == as_set(&orbits), "orbits under a, b differ from the full group");
    let pairs = incident_pairs();
    let mut classes: BTreeMap<String, BTreeSet<(usize, usize)>> = BTreeMap::new();
    for (i, &(p, d)) in pairs.iter().enumerate() {
        for (j, &(p2, d2)) in pairs.iter().enumerate() {
            classes
                .entry(classify_pair(&ip(p, d), &ip(p2, d2)).to_string())
                .or_default()
                .insert((i, j));
        }
    }
    let lib: BTreeSet<_> = classes.values().cloned().collect();
    ensure!(lib == as_set(&orbits), "library classes are not the orbits");
    Ok(format!("orbits {sizes:?}, closed under a, b"))
}

// ---------------------------------------------------------------------------
// Criterion 10

fn signed_perm_matrix(x: &AugElt) -> Mat {
    let mut m = vec![0; 49];
    for p in 0..7 {
        m[x.0[p] * 7 + p] = x.1[p] as i64;
    }
    m
}

fn criterion_10() -> Outcome {
    let w = world();
    let pairs = incident_pairs();
    let xs: BTreeMap<(usize, usize), Mat> = pairs.iter().map(|&(p, d)| ((p, d), x_mat(p, d))).collect();
    let mut counts: BTreeMap<[i8; 7], usize> = BTreeMap::new();
    let mut lib_by_elt: BTreeMap<AugElt, SignPointFn> = BTreeMap::new();
    for x in w.aug.elements() {
        lib_by_elt.insert(library_aug(x), w.g2.delta_hat_fn(x).map_err(|e| e.to_string())?);
    }
    for x in &w.oracle_aug {
        let s = signed_perm_matrix(x);
        let st = transpose(&s);
        let mut delta = [0i8; 7];
        for &(p, d) in &pairs {
            let conj = mat_mul(&mat_mul(&s, &xs[&(p, d)]), &st);
            let target = &xs[&(x.0[p], line_image(&x.0, d))];
            let sign = if &conj == target {
                1
            } else if conj.iter().zip(target).all(|(a, b)| *a == -*b) {
                -1
            } else {
                return Err("conjugate of X(P,D) is not +-X(gP,gD)".into());
            };
            ensure!(delta[p] == 0 || delta[p] == sign, "delta depends on D");
            delta[p] = sign;
        }
        ensure!(delta.iter().product::<i8>() == 1, "delta not in R");
        for d in 0..7 {
            let r: i8 = lines()[d].iter().map(|&p| delta[p]).product();
            ensure!(r == oracle_delta_star(&x.0, d), "Radon transform differs from delta*");
        }
        let lib = lib_by_elt[x];
        ensure!((0..7).all(|p| lib.at(pt(p)) == delta[p]), "library delta differs");
        *counts.entry(delta).or_insert(0) += 1;
    }
    ensure!(counts.len() == 64, "{} distinct functions", counts.len());
    ensure!(counts.values().all(|&n| n == 21), "multiplicities differ from 21");
    let census = delta_hat_census(&w.g2, &w.aug).map_err(|e| e.to_string())?;
    ensure!(census.distinct_functions == 64, "library census {census:?}");
    Ok("1344 elements, 64 functions x 21, Radon transform is delta*".into())
}

// ---------------------------------------------------------------------------
// Criterion 11

fn cartan_basis(p: usize) -> Vec<Mat> {
    (0..7).filter(|&d| on_line(p, d)).map(|d| x_mat(p, d)).collect()
}

fn criterion_11_attainable() -> Outcome {
    let w = world();
    // h_P: abelian, 2-dimensional, self-centralizing.
    for p in 0..7 {
        let h = cartan_basis(p);
        ensure!(rank(&h) == 2, "h_P{} has rank {}", p + 1, rank(&h));
        ensure!(h.iter().all(|a| h.iter().all(|b| comm(a, b).iter().all(|&x| x == 0))), "h_P not abelian");
        // Coefficients c with [sum c_k der_k, h] = 0 for h in h_P.
        let mut rows = vec![vec![0i64; 14]; 49 * 2];
        for (k, b) in w.der.iter().enumerate() {
            for (hi, hm) in h.iter().take(2).enumerate() {
                let c = comm(b, hm);
                for e in 0..49 {
                    rows[hi * 49 + e][k] = c[e];
                }
            }
        }
        let cent = nullspace(&rows, 14);
        ensure!(cent.len() == 2, "centralizer of h_P{} has dimension {}", p + 1, cent.len());
    }
    // Decomposition and [h_P, h_Q] = h_{P+Q}.
    let all: Vec<Mat> = (0..7).flat_map(cartan_basis).collect();
    ensure!(rank(&all) == 14, "sum of h_P has rank {}", rank(&all));
    for p in 0..7 {
        for q in 0..7 {
            if p == q {
                continue;
            }
            let br: Vec<Mat> = cartan_basis(p)
                .iter()
                .flat_map(|a| cartan_basis(q).into_iter().map(move |b| comm(a, &b)))
                .collect();
            ensure!(span_eq(&br, &cartan_basis(third(p, q))), "[h_P, h_Q] != h_(P+Q)");
            for a in cartan_basis(p) {
                for b in cartan_basis(q) {
                    ensure!(trace(&mat_mul(&a, &b)) == 0, "h_P, h_Q not orthogonal");
                }
            }
        }
    }
    // g_D: two commuting perfect 3-dimensional ideals preserving the line span.
    for d in 0..7 {
        let on: Vec<usize> = lines()[d].to_vec();
        let xi: Vec<Mat> = on.iter().map(|&p| x_mat(p, d)).collect();
        let yi: Vec<Mat> = on.iter().map(|&p| so7_mat(&w.g2.y(&ip(p, d)))).collect();
        ensure!(rank(&xi) == 3 && rank(&yi) == 3, "ideal dimensions at D{}", d + 1);
        let bx: Vec<Mat> = xi.iter().flat_map(|a| xi.iter().map(move |b| comm(a, b))).collect();
        let by: Vec<Mat> = yi.iter().flat_map(|a| yi.iter().map(move |b| comm(a, b))).collect();
        ensure!(span_eq(&bx, &xi) && span_eq(&by, &yi), "ideals not perfect at D{}", d + 1);
        ensure!(
            xi.iter().all(|a| yi.iter().all(|b| comm(a, b).iter().all(|&x| x == 0))),
            "ideals do not commute at D{}",
            d + 1
        );
        let gd: Vec<Mat> = xi.iter().chain(&yi).cloned().collect();
        ensure!(rank(&gd) == 6, "g_D{} has dimension {}", d + 1, rank(&gd));
        for m in &gd {
            for r in 0..7 {
                for c in 0..7 {
                    if on.contains(&r) != on.contains(&c) {
                        ensure!(m[r * 7 + c] == 0, "line span not invariant at D{}", d + 1);
                    }
                }
            }
        }
        for m in &xi {
            ensure!(on.iter().all(|&c| (0..7).all(|r| m[r * 7 + c] == 0)), "X ideal moves the line span");
        }
    }
    // s_P: derivations killing e_P.
    let t = table();
    for p in 0..7 {
        let rows: Vec<Vec<i64>> = (0..7)
            .map(|r| w.der.iter().map(|m| m[r * 7 + p]).collect())
            .collect();
        let coeffs = nullspace(&rows, 14);
        ensure!(coeffs.len() == 8, "stabilizer of e_P{} has dimension {}", p + 1, coeffs.len());
        let sp: Vec<Mat> = coeffs
            .iter()
            .map(|c| {
                let terms: Vec<(i64, &Mat)> = c.iter().copied().zip(w.der.iter()).collect();
                lin(&terms)
            })
            .collect();
        let gens: Vec<Mat> = w.g2.point_generators(pt(p)).iter().map(so7_mat).collect();
        ensure!(gens.len() == 8 && span_eq(&gens, &sp), "library generators do not span s_P{}", p + 1);
        ensure!(lie_closure(&sp).len() == 8, "s_P{} not closed", p + 1);
        let rep = w.g2.point_subalgebra(pt(p));
        ensure!(rep.dim == 8 && rep.closed && rep.annihilates_e_p, "library s_P report {rep:?}");
        // J = left multiplication by e_P on the orthogonal complement.
        let mut j = vec![0i64; 49];
        for c in (0..7).filter(|&c| c != p) {
            let (s, k) = t[p + 1][c + 1];
            j[(k - 1) * 7 + c] = s;
        }
        let j2 = mat_mul(&j, &j);
        ensure!(
            (0..7).all(|r| (0..7).all(|c| j2[r * 7 + c] == if r == c && r != p { -1 } else { 0 })),
            "J^2 != -1"
        );
        ensure!(lin(&[(1, &j), (1, &transpose(&j))]).iter().all(|&x| x == 0), "J not an isometry");
        ensure!(sp.iter().all(|m| comm(m, &j).iter().all(|&x| x == 0)), "J does not commute with s_P");
    }
    // sqrt(-1) decides the Chevalley branch.
    let has_i = |p: i64| (0..p).any(|x| (x * x + 1) % p == 0);
    ensure!(has_i(5) && !has_i(3), "sqrt(-1) oracle");
    let p1 = Point::ALL[0];
    let chev = [
        G2::<Gaussian<Rational>>::new().chevalley_relations(p1),
        G2::<Fp<5>>::new().chevalley_relations(p1),
        w.g2.chevalley_relations(p1),
        G2::<Fp<3>>::new().chevalley_relations(p1),
    ];
    ensure!(chev == [Some(true), Some(true), None, None], "Chevalley branches {chev:?}");
    Ok("h_P, decomposition, g_D, s_P, J and the sqrt(-1) branches".into())
}

/// Dimensions generated by O4 pairs, the 168-element orbit.
fn o4_dimensions() -> BTreeSet<usize> {
    let w = world();
    let orbit = pair_orbits(&w.group).into_iter().find(|o| o.len() == 168).expect("O4 orbit");
    let pairs = incident_pairs();
    orbit
        .iter()
        .map(|&(i, j)| {
            let (a, b) = (pairs[i], pairs[j]);
            lie_closure(&[x_mat(a.0, a.1), x_mat(b.0, b.1)]).len()
        })
        .collect()
}

fn criterion_11_o4() -> Outcome {
    let dims = o4_dimensions();
    ensure!(
        dims == [14].into_iter().collect(),
        "O4 pairs generate subalgebras of dimension {dims:?}, not 14"
    );
    Ok("every O4 pair generates 14 dimensions".into())
}

fn criterion_11() -> Outcome {
    let a = criterion_11_attainable()?;
    let b = criterion_11_o4()?;
    Ok(format!("{a}; {b}"))
}

// ---------------------------------------------------------------------------
// Criterion 12

fn mat_pow_trace(m: &[Vec<BigInt>], k: u32) -> BigInt {
    let n = m.len();
    let mut acc: Vec<Vec<BigInt>> = (0..n).map(|i| (0..n).map(|j| BigInt::from((i == j) as i64)).collect()).collect();
    for _ in 0..k {
        let mut next = vec![vec![BigInt::zero(); n]; n];
        for i in 0..n {
            for l in 0..n {
                if acc[i][l].is_zero() {
                    continue;
                }
                for j in 0..n {
                    if !m[l][j].is_zero() {
                        next[i][j] += &acc[i][l] * &m[l][j];
                    }
                }
            }
        }
        acc = next;
    }
    (0..n).map(|i| acc[i][i].clone()).sum()
}

/// `ad(h)` on so(7) in the basis `E_ij = e_i e_j^T - e_j e_i^T`, `i < j`.
fn ad_so7(h: &Mat) -> Vec<Vec<BigInt>> {
    let idx: Vec<(usize, usize)> = (0..7).flat_map(|i| (i + 1..7).map(move |j| (i, j))).collect();
    let mut m = vec![vec![BigInt::zero(); 21]; 21];
    for (c, &(i, j)) in idx.iter().enumerate() {
        let mut e = vec![0; 49];
        e[i * 7 + j] = 1;
        e[j * 7 + i] = -1;
        let z = comm(h, &e);
        for (r, &(k, l)) in idx.iter().enumerate() {
            m[r][c] = BigInt::from(z[k * 7 + l]);
        }
    }
    m
}

fn criterion_12() -> Outcome {
    let w = world();
    for p in 0..7 {
        let ls: Vec<usize> = (0..7).filter(|&d| on_line(p, d)).collect();
        let (h1, h2) = (x_mat(p, ls[0]), x_mat(p, ls[1]));
        // Weights on V: h rotates each plane {e_Q, e_{P+Q}} by r(h).
        let planes: Vec<(usize, usize)> = ls
            .iter()
            .map(|&d| {
                let o: Vec<usize> = lines()[d].iter().copied().filter(|&x| x != p).collect();
                (o[0], o[1])
            })
            .collect();
        let r = |h: &Mat, (a, b): (usize, usize)| h[b * 7 + a];
        for h in [&h1, &h2] {
            for rr in 0..7 {
                for cc in 0..7 {
                    let in_plane = planes.iter().any(|&(a, b)| (rr, cc) == (a, b) || (rr, cc) == (b, a));
                    ensure!(in_plane || h[rr * 7 + cc] == 0, "h_P is not block diagonal");
                }
            }
        }
        let short: Vec<(i64, i64)> = planes.iter().map(|&pl| (r(&h1, pl), r(&h2, pl))).collect();
        let mut cands: Vec<(i64, i64)> = short.clone();
        for i in 0..3 {
            for j in i + 1..3 {
                cands.push((short[i].0 + short[j].0, short[i].1 + short[j].1));
                cands.push((short[i].0 - short[j].0, short[i].1 - short[j].1));
            }
        }
        // Candidates up to sign; some sums coincide with short weights.
        let cands: Vec<(i64, i64)> = cands
            .into_iter()
            .filter(|&c| c != (0, 0))
            .map(|(a, b)| if a < 0 || (a == 0 && b < 0) { (-a, -b) } else { (a, b) })
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let n = cands.len() as u32;
        // Power sums of ad(h) on g2 = so(7) minus V.
        let samples = [(1i64, 0i64), (0, 1), (1, 2), (2, -1), (3, 1), (1, -3), (2, 5)];
        let mut target = Vec::new();
        for &(s, t) in &samples {
            let h = lin(&[(s, &h1), (t, &h2)]);
            let ad = ad_so7(&h);
            let hv: Vec<Vec<BigInt>> = (0..7).map(|i| (0..7).map(|j| BigInt::from(h[i * 7 + j])).collect()).collect();
            for k in 1..=6u32 {
                let tr = mat_pow_trace(&ad, 2 * k) - mat_pow_trace(&hv, 2 * k);
                target.push(if k % 2 == 0 { tr } else { -tr });
            }
        }
        let mut matches = Vec::new();
        for mask in 0u32..1 << n {
            if mask.count_ones() != 6 {
                continue;
            }
            let chosen: Vec<(i64, i64)> = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| cands[i as usize]).collect();
            let mut sums = Vec::new();
            for &(s, t) in &samples {
                for k in 1..=6u32 {
                    let v: BigInt = chosen
                        .iter()
                        .map(|&(a, b)| BigInt::from(2) * BigInt::from(a * s + b * t).pow(2 * k))
                        .sum();
                    sums.push(v);
                }
            }
            if sums == target {
                matches.push(chosen);
            }
        }
        ensure!(matches.len() == 1, "{} root sets fit the traces at P{}", matches.len(), p + 1);
        let half = &matches[0];
        let roots: Vec<(i64, i64)> = half.iter().flat_map(|&(a, b)| [(a, b), (-a, -b)]).collect();
        ensure!(roots.iter().collect::<BTreeSet<_>>().len() == 12, "roots are not distinct");
        // Lengths for the inner product dual to -tr on h_P.
        let g = [
            [-trace(&mat_mul(&h1, &h1)), -trace(&mat_mul(&h1, &h2))],
            [-trace(&mat_mul(&h2, &h1)), -trace(&mat_mul(&h2, &h2))],
        ];
        let det = g[0][0] * g[1][1] - g[0][1] * g[1][0];
        let ginv = [[q(g[1][1]), q(-g[0][1])], [q(-g[1][0]), q(g[0][0])]];
        let dot = |x: (i64, i64), y: (i64, i64)| -> Q {
            let (x, y) = ([q(x.0), q(x.1)], [q(y.0), q(y.1)]);
            let mut s = Q::zero();
            for i in 0..2 {
                for j in 0..2 {
                    s += &x[i] * &ginv[i][j] * &y[j];
                }
            }
            s / q(det)
        };
        let lens: BTreeMap<Q, usize> = roots.iter().fold(BTreeMap::new(), |mut m, &x| {
            *m.entry(dot(x, x)).or_insert(0) += 1;
            m
        });
        let lv: Vec<(&Q, &usize)> = lens.iter().collect();
        ensure!(
            lv.len() == 2 && *lv[0].1 == 6 && *lv[1].1 == 6 && lv[1].0 == &(lv[0].0 * q(3)),
            "root lengths {lens:?}"
        );
        let set: BTreeSet<(i64, i64)> = roots.iter().copied().collect();
        for &a in &roots {
            for &b in &roots {
                let n = q(2) * dot(b, a) / dot(a, a);
                ensure!(n.is_integer() && n.abs() <= q(3), "Cartan integer {n}");
                let n = n.to_integer().to_i64().unwrap();
                ensure!(set.contains(&(b.0 - n * a.0, b.1 - n * a.1)), "not closed under reflections");
            }
        }
        let rep = w.g2.root_system(pt(p));
        ensure!(
            rep.count == 12 && rep.short == 6 && rep.long == 6 && rep.in_cartan && rep.pattern_matches,
            "library root report {rep:?}"
        );
    }
    Ok("12 roots per point, 6 short + 6 long with ratio 3, Weyl-closed".into())
}

// ---------------------------------------------------------------------------
// Criterion 13

type Form = BTreeMap<Vec<u8>, i64>;

/// Sign that sorts `idx`, or `None` on a repeat.
fn sort_sign(idx: &[u8]) -> Option<(i64, Vec<u8>)> {
    let mut v = idx.to_vec();
    let mut sign = 1;
    for i in 0..v.len() {
        for j in 0..v.len() - 1 - i {
            if v[j] == v[j + 1] {
                return None;
            }
            if v[j] > v[j + 1] {
                v.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    Some((sign, v))
}

fn wedge(a: &Form, b: &Form) -> Form {
    let mut out = Form::new();
    for (i, x) in a {
        for (j, y) in b {
            let cat: Vec<u8> = i.iter().chain(j).copied().collect();
            if let Some((s, k)) = sort_sign(&cat) {
                *out.entry(k).or_insert(0) += s * x * y;
            }
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

fn contract(v: u8, f: &Form) -> Form {
    let mut out = Form::new();
    for (idx, c) in f {
        if let Some(pos) = idx.iter().position(|&x| x == v) {
            let mut rest = idx.clone();
            rest.remove(pos);
            *out.entry(rest).or_insert(0) += if pos % 2 == 0 { *c } else { -*c };
        }
    }
    out.retain(|_, v| *v != 0);
    out
}

fn oracle_omega() -> Form {
    let t = table();
    let mut f = Form::new();
    for a in 1..8u8 {
        for b in a + 1..8 {
            for c in b + 1..8 {
                // omega(x, y, z) = <xy, z>; every ordering must agree.
                let perms = [[a, b, c], [b, c, a], [c, a, b], [b, a, c], [a, c, b], [c, b, a]];
                let vals: BTreeSet<i64> = perms
                    .iter()
                    .map(|p| {
                        let (s, k) = t[p[0] as usize][p[1] as usize];
                        let sign = sort_sign(p).unwrap().0;
                        if k == p[2] as usize {
                            s * sign
                        } else {
                            0
                        }
                    })
                    .collect();
                assert_eq!(vals.len(), 1, "<xy, z> is not alternating");
                let v = *vals.iter().next().unwrap();
                if v != 0 {
                    f.insert(vec![a, b, c], v);
                }
            }
        }
    }
    f
}

fn hodge(f: &Form) -> Form {
    f.iter()
        .map(|(idx, c)| {
            let rest: Vec<u8> = (1..8).filter(|x| !idx.contains(x)).collect();
            let cat: Vec<u8> = idx.iter().chain(&rest).copied().collect();
            (rest, sort_sign(&cat).unwrap().0 * c)
        })
        .collect()
}

fn lib_form(f: &fano_g2::forms::ExteriorForm<Rational>) -> Form {
    f.terms().map(|(k, v)| (k, v.to_i64().unwrap())).collect()
}

fn criterion_13() -> Outcome {
    let w = world();
    let eps = canonical();
    let om = oracle_omega();
    ensure!(om.len() == 7, "omega has {} terms", om.len());
    let lib_om = lib_form(&omega::<Rational>(&eps).map_err(|e| e.to_string())?);
    ensure!(lib_om == om, "library omega differs: {lib_om:?}");
    let big: Form = hodge(&om).into_iter().map(|(k, v)| (k, -v)).collect();
    ensure!(big.len() == 7, "Omega has {} terms", big.len());
    let lib_big = lib_form(&big_omega::<Rational>(&eps).map_err(|e| e.to_string())?);
    ensure!(lib_big == big, "library Omega is not -*omega: {lib_big:?}");
    let vol: Vec<u8> = (1..8).collect();
    let w7 = wedge(&big, &om);
    ensure!(w7 == [(vol.clone(), -7)].into_iter().collect(), "Omega ^ omega = {w7:?}");
    for i in 1..8u8 {
        for j in 1..8u8 {
            let x = wedge(&wedge(&contract(i, &om), &contract(j, &om)), &om);
            let want: Form = if i == j { [(vol.clone(), -6)].into_iter().collect() } else { Form::new() };
            ensure!(x == want, "contraction identity fails at ({i}, {j}): {x:?}");
        }
    }
    let norm = |f: &Form| f.values().map(|v| v * v).sum::<i64>();
    ensure!(norm(&om) == 7 && norm(&big) == 7, "norms {} {}", norm(&om), norm(&big));
    // Invariant 3-forms: unknowns indexed by sorted triples.
    let triples: Vec<Vec<u8>> = (1..8u8)
        .flat_map(|a| (a + 1..8).flat_map(move |b| (b + 1..8).map(move |c| vec![a, b, c])))
        .collect();
    let tidx = |v: &[u8]| sort_sign(v).map(|(s, k)| (s, triples.iter().position(|t| *t == k).unwrap()));
    let mut rows = Vec::new();
    for m in &w.der {
        for t in &triples {
            let mut row = vec![0i64; 35];
            for slot in 0..3 {
                for r in 1..8u8 {
                    let coeff = m[(r as usize - 1) * 7 + (t[slot] as usize - 1)];
                    if coeff == 0 {
                        continue;
                    }
                    let mut u = t.clone();
                    u[slot] = r;
                    if let Some((s, k)) = tidx(&u) {
                        row[k] += s * coeff;
                    }
                }
            }
            rows.push(row);
        }
    }
    let inv = nullspace(&rows, 35);
    ensure!(inv.len() == 1, "invariant 3-forms have dimension {}", inv.len());
    let om_vec: Vec<i64> = triples.iter().map(|t| *om.get(t).unwrap_or(&0)).collect();
    ensure!(rank(&[inv[0].clone(), om_vec]) == 1, "omega is not the invariant 3-form");
    let r = forms_report(&w.g2).map_err(|e| e.to_string())?;
    ensure!(
        r.omega_terms == 7 && r.big_omega_terms == 7 && r.invariant_3form_dim == 1 && r.contraction_identity,
        "library forms report {r:?}"
    );
    Ok("7 + 7 terms, invariant dim 1, contraction -6, wedge -7, norms 7".into())
}

// ---------------------------------------------------------------------------
// Criterion 14

fn criterion_14() -> Outcome {
    let alg = OctonionAlgebra::canonical();
    let rendered: Vec<String> = alg
        .table()
        .iter()
        .map(|row| row.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" "))
        .collect();
    ensure!(rendered == FROZEN_TABLE, "table differs: {rendered:?}");
    let mut rng = rand::rngs::StdRng::seed_from_u64(0xacce);
    let samples = 200;
    for _ in 0..samples {
        let x: [i64; 8] = std::array::from_fn(|_| rng.gen_range(-20..=20));
        let y: [i64; 8] = std::array::from_fn(|_| rng.gen_range(-20..=20));
        let z = oct_mul(&x, &y);
        ensure!(oct_norm(&z) == oct_norm(&x) * oct_norm(&y), "N(xy) != N(x)N(y) for {x:?}, {y:?}");
        let lib = alg.mul(&Octonion::<Rational>::from_i64(x), &Octonion::from_i64(y));
        let lib: Vec<i64> = lib.coeffs().iter().map(|c| c.to_i64().unwrap()).collect();
        ensure!(lib == z, "library product differs");
    }
    let report = alg.norm_multiplicativity_check(128, 7).map_err(|e| e.to_string())?;
    ensure!(report.structural && alg.norm_multiplicativity_symbolic(), "structural check failed");
    let basis = |k: usize| -> [i64; 8] { std::array::from_fn(|i| (i == k) as i64) };
    for l in lines() {
        let idx: Vec<usize> = std::iter::once(0).chain(l.iter().map(|p| p + 1)).collect();
        for &a in &idx {
            for &b in &idx {
                for &c in &idx {
                    let (x, y, z) = (basis(a), basis(b), basis(c));
                    ensure!(
                        oct_mul(&oct_mul(&x, &y), &z) == oct_mul(&x, &oct_mul(&y, &z)),
                        "quaternion subalgebra not associative"
                    );
                }
            }
        }
    }
    let t = table();
    let mut triples = 0;
    for a in 0..7 {
        for b in a + 1..7 {
            for c in b + 1..7 {
                if MASK[a] ^ MASK[b] ^ MASK[c] == 0 {
                    continue;
                }
                let mut set: BTreeSet<usize> = [0, a + 1, b + 1, c + 1].into_iter().collect();
                loop {
                    let next: BTreeSet<usize> =
                        set.iter().flat_map(|&x| set.iter().map(move |&y| t[x][y].1)).chain(set.iter().copied()).collect();
                    if next == set {
                        break;
                    }
                    set = next;
                }
                ensure!(set.len() == 8, "non-aligned triple generates {}", set.len());
                let lib = alg.subalgebra_generated(&[pt(a), pt(b), pt(c)]).map_err(|e| e.to_string())?;
                ensure!(lib == 8, "library generated dimension {lib}");
                triples += 1;
            }
        }
    }
    Ok(format!("table matches, {samples} random norm checks, quaternions, {triples} triples generate 8"))
}

// ---------------------------------------------------------------------------

const CRITERIA: [fn() -> Outcome; 14] = [
    criterion_1,
    criterion_2,
    criterion_3,
    criterion_4,
    criterion_5,
    criterion_6,
    criterion_7,
    criterion_8,
    criterion_9,
    criterion_10,
    criterion_11,
    criterion_12,
    criterion_13,
    criterion_14,
];

/// Criteria whose full statement cannot hold; their attainable parts are
/// still asserted below.
const UNATTAINABLE: [usize; 1] = [11];

#[test]
fn acceptance_summary() {
    let mut failures = Vec::new();
    for (i, f) in CRITERIA.iter().enumerate() {
        let n = i + 1;
        match f() {
            Ok(detail) => println!("criterion {n:>2}: PASS  {detail}"),
            Err(why) => {
                println!("criterion {n:>2}: FAIL  {why}");
                if !UNATTAINABLE.contains(&n) {
                    failures.push(n);
                }
            }
        }
    }
    assert!(criterion_11_attainable().is_ok(), "criterion 11 attainable parts fail");
    assert!(failures.is_empty(), "criteria failed: {failures:?}");
}

fn check(f: fn() -> Outcome) {
    if let Err(why) = f() {
        panic!("{why}");
    }
}

#[test]
fn criterion_01_collineation_group() {
    check(criterion_1);
}

#[test]
fn criterion_02_order7_classes() {
    check(criterion_2);
}

#[test]
fn criterion_03_composition_factors() {
    check(criterion_3);
}

#[test]
fn criterion_04_radon_transform() {
    check(criterion_4);
}

#[test]
fn criterion_05_delta_star() {
    check(criterion_5);
}

#[test]
fn criterion_06_covering_group() {
    check(criterion_6);
}

#[test]
fn criterion_07_g2_dimension() {
    check(criterion_7);
}

#[test]
fn criterion_08_bracket_law() {
    check(criterion_8);
}

#[test]
fn criterion_09_incidence_orbits() {
    check(criterion_9);
}

#[test]
fn criterion_10_delta_hat() {
    check(criterion_10);
}

#[test]
fn criterion_11_subalgebras() {
    check(criterion_11_attainable);
}

#[test]
fn criterion_11_o4_pairs_close_at_dimension_3() {
    assert_eq!(o4_dimensions(), [3].into_iter().collect());
}

#[test]
#[ignore = "unattainable: every O4 pair generates a 3-dimensional subalgebra"]
fn criterion_11_o4_pairs_generate_g2() {
    check(criterion_11_o4);
}

#[test]
fn criterion_12_root_system() {
    check(criterion_12);
}

#[test]
fn criterion_13_forms() {
    check(criterion_13);
}

#[test]
fn criterion_14_octonions() {
    check(criterion_14);
}
