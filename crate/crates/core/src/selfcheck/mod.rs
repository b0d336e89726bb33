//! The acceptance criteria as a runnable suite.
//!
//! Each criterion returns a verdict with a one-line detail and its running
//! time. Criterion 11 only records evidence and passes once the probe has
//! been computed.

pub mod oracles;

use std::time::Instant;

use num_traits::One;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::arnold::{enumerate_g, ArnoldElement, Pair};
use crate::braids::{
    exactness_probe, pentagon_apply, pentagon_solutions, tot_primitive, total_differential, BraidCaps, BraidContext,
    CeChain, TotChain,
};
use crate::graphs::{census, compose_operators, d_h, def_degree, def_total_differential, g_compose, tw_differential};
use crate::graphs::{Graph, GraphElement, PolyOperator};
use crate::lie::Poly;
use crate::linalg::{add_entry, solve_combination, Indexer, SparseVec};
use crate::moduli::{adelta_basis, blocks, is_regular, mzv_form, residue, zeta_numeric, MzvComposition};
use crate::scalar::{self, Scalar};
use crate::weights::{
    arnold_inclusion, decompose_bracketing, euler_probe, grt_image_check, handle_adelta, handle_coger, induced_map,
    truncated_generators, verify_certificate, BraidCeHandle, Cooperad, ShuffleMode, WeightCaps, WeightDifferential,
};
use crate::words::{alpha_of, enumerate_l, enumerate_p, project_ker_iota};
use oracles::{prime_counts_from_series, random_free, stirling, FreeQuotient};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Level {
    /// Reduced sample sizes.
    Quick,
    Full,
}

#[derive(Clone, Debug)]
pub struct Verdict {
    pub id: usize,
    pub title: &'static str,
    pub pass: bool,
    pub detail: String,
    pub seconds: f64,
    pub budget: f64,
}

impl Verdict {
    pub fn line(&self) -> String {
        format!(
            "{} [{:>2}] {} ({:.2} s): {}",
            if self.pass { "PASS" } else { "FAIL" },
            self.id,
            self.title,
            self.seconds,
            self.detail
        )
    }

    pub fn to_json(&self) -> Value {
        json!({
            "criterion": self.id,
            "title": self.title,
            "status": if self.pass { "PASS" } else { "FAIL" },
            "detail": self.detail,
            "seconds": self.seconds,
            "budget_seconds": self.budget,
        })
    }
}

type Outcome = Result<(bool, String), String>;

struct Criterion {
    id: usize,
    title: &'static str,
    budget: f64,
    run: fn(Level) -> Outcome,
}

const CRITERIA: [Criterion; 13] = [
    Criterion {
        id: 1,
        title: "Arnol'd dimensions",
        budget: 30.0,
        run: arnold_dimensions,
    },
    Criterion {
        id: 2,
        title: "bracketing counts",
        budget: 10.0,
        run: bracketing_counts,
    },
    Criterion {
        id: 3,
        title: "normal-form soundness",
        budget: 60.0,
        run: normal_form_soundness,
    },
    Criterion {
        id: 4,
        title: "rewriting example",
        budget: 10.0,
        run: rewriting_example,
    },
    Criterion {
        id: 5,
        title: "moduli forms and residues",
        budget: 60.0,
        run: moduli_forms,
    },
    Criterion {
        id: 6,
        title: "weights differential",
        budget: 120.0,
        run: weights_differential,
    },
    Criterion {
        id: 7,
        title: "pentagon kernel",
        budget: 120.0,
        run: pentagon,
    },
    Criterion {
        id: 8,
        title: "transport and exactness",
        budget: 60.0,
        run: transport,
    },
    Criterion {
        id: 9,
        title: "surjectivity instances",
        budget: 300.0,
        run: surjectivity,
    },
    Criterion {
        id: 10,
        title: "injectivity instances",
        budget: 300.0,
        run: injectivity,
    },
    Criterion {
        id: 11,
        title: "Euler relation probe",
        budget: 120.0,
        run: euler,
    },
    Criterion {
        id: 12,
        title: "graph complexes",
        budget: 300.0,
        run: graphs,
    },
    Criterion {
        id: 13,
        title: "numerics",
        budget: 10.0,
        run: numerics,
    },
];

/// Runs one criterion by number.
pub fn run_one(id: usize, level: Level) -> Option<Verdict> {
    let c = CRITERIA.iter().find(|c| c.id == id)?;
    let start = Instant::now();
    let outcome = (c.run)(level);
    let seconds = start.elapsed().as_secs_f64();
    let (pass, mut detail) = match outcome {
        Ok(v) => v,
        Err(e) => (false, format!("error: {e}")),
    };
    let in_time = seconds <= c.budget;
    if !in_time {
        detail.push_str(&format!("; exceeded the {:.0} s budget", c.budget));
    }
    Some(Verdict {
        id: c.id,
        title: c.title,
        pass: pass && in_time,
        detail,
        seconds,
        budget: c.budget,
    })
}

/// Runs every criterion in order.
pub fn run(level: Level) -> Vec<Verdict> {
    CRITERIA.iter().filter_map(|c| run_one(c.id, level)).collect()
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn arnold_dimensions(_: Level) -> Outcome {
    let mut bad = Vec::new();
    for n in 1..=6 {
        for k in 0..n {
            let g = enumerate_g(n, k).len();
            if g as u64 != stirling(n, n - k) || g != FreeQuotient::new(n, k).dim() {
                bad.push(format!("({n},{k})"));
            }
        }
    }
    let row = |n: usize| (0..n).map(|k| enumerate_g(n, k).len()).collect::<Vec<_>>();
    let ok = bad.is_empty() && row(4) == [1, 6, 11, 6] && row(5) == [1, 10, 35, 50, 24];
    Ok((ok, format!("n=4 {:?}, n=5 {:?}, mismatches {:?}", row(4), row(5), bad)))
}

fn bracketing_counts(_: Level) -> Outcome {
    let ls: Vec<usize> = (2..=6).map(|n| enumerate_l(n).len()).collect();
    let fact: Vec<usize> = (2..=6).map(|n| (1..n).product()).collect();
    let ps: Vec<i64> = (2..=6).map(|n| enumerate_p(n).len() as i64).collect();
    let series = prime_counts_from_series(6);
    let ok = ls == fact && ps[..4] == [1, 0, 1, 4] && ps[..] == series[2..=6];
    Ok((ok, format!("|L| {ls:?}, |P| {ps:?}, series {:?}", &series[2..=6])))
}

fn normal_form_soundness(level: Level) -> Outcome {
    let total = if level == Level::Full { 1000 } else { 100 };
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let shapes: Vec<(usize, usize)> = (2..=5).flat_map(|n| (1..n).map(move |k| (n, k))).collect();
    let quotients: Vec<FreeQuotient> = shapes.iter().map(|&(n, k)| FreeQuotient::new(n, k)).collect();
    let mut failures = 0;
    for t in 0..total {
        let q = &quotients[t % shapes.len()];
        let free = random_free(&mut rng, q.n, q.k);
        let nf = ArnoldElement::normal_form(q.n, &free).map_err(err)?;
        let back: Vec<(Scalar, Vec<Pair>)> = nf.terms().iter().map(|(m, c)| (c.clone(), m.clone())).collect();
        if !q.same_coset(&free, &back) {
            failures += 1;
        }
    }
    Ok((
        failures == 0,
        format!("{total} random elements at n <= 5, {failures} mismatches"),
    ))
}

fn rewriting_example(_: Level) -> Outcome {
    let w = ArnoldElement::gen;
    let lhs = w(3, 1, 2).multiply(&w(3, 2, 3)).map_err(err)?;
    let expected = ArnoldElement::normal_form(
        3,
        &[
            (Scalar::one(), vec![(1, 2), (1, 3)]),
            (scalar::int(-1), vec![(2, 3), (1, 3)]),
        ],
    )
    .map_err(err)?;
    Ok((lhs == expected, format!("w12*w23 = {}", lhs.to_text())))
}

fn moduli_forms(_: Level) -> Outcome {
    let mut dims = Vec::new();
    let mut ok = true;
    for n in 2..=5 {
        let b = adelta_basis(n, n - 2);
        dims.push(b.basis.len());
        ok &= b.basis.len() == enumerate_p(n).len() && b.warning.is_none();
    }
    let w = ArnoldElement::gen;
    let p = project_ker_iota(&w(4, 1, 3).multiply(&w(4, 2, 4)).map_err(err)?);
    let explicit = ArnoldElement::normal_form(
        4,
        &[
            (Scalar::one(), vec![(1, 3), (2, 4)]),
            (scalar::int(-1), vec![(1, 4), (2, 4)]),
            (scalar::int(-1), vec![(1, 3), (1, 4)]),
        ],
    )
    .map_err(err)?;
    let z2 = mzv_form(&MzvComposition::new(vec![2]).map_err(err)?).map_err(err)?.form;
    ok &= z2 == explicit && z2 == p;
    let mut checked = 0;
    for n in 2..=5 {
        for d in 0..=n - 2 {
            for e in adelta_basis(n, d).basis {
                ok &= is_regular(&e);
                for (i, k) in blocks(n) {
                    ok &= residue(&e, i, k).map_err(err)?.is_zero();
                }
                checked += 1;
            }
        }
    }
    Ok((
        ok,
        format!("top dims {dims:?}, mzv(2) = p(w13 w24), {checked} adelta basis forms regular"),
    ))
}

fn d_squared(h: &dyn Cooperad, max_n: usize) -> Result<(usize, usize), String> {
    let d = WeightDifferential::new(h);
    let (mut count, mut bad) = (0, 0);
    for n in 2..=max_n {
        for g in truncated_generators(h, n).map_err(err)? {
            let dg = d.on_generator(&g).map_err(err)?;
            if !d.apply(&dg).map_err(err)?.is_zero() {
                bad += 1;
            }
            count += 1;
        }
    }
    Ok((count, bad))
}

fn weights_differential(level: Level) -> Outcome {
    let caps = WeightCaps::default();
    let coger = handle_coger(caps);
    let adelta = handle_adelta(caps);
    let braid_caps = WeightCaps {
        max_arity: 5,
        max_weight: 3,
        max_length: if level == Level::Full { 2 } else { 1 },
    };
    let braid = BraidCeHandle::new(braid_caps);
    let a = d_squared(&coger, caps.max_arity)?;
    let b = d_squared(&adelta, caps.max_arity)?;
    let c = d_squared(&braid, braid_caps.max_arity)?;
    let d = WeightDifferential::new(&coger);
    let sym = |n: usize| -> Result<crate::weights::WeightElement, String> {
        let mut e = crate::weights::WeightElement::zero();
        for (g, x) in coger.from_arnold(&ArnoldElement::gen(n, 1, 2), 1).map_err(err)? {
            e.add_generator(g, x);
        }
        Ok(e)
    };
    let identity = d.apply(&sym(4)?).map_err(err)? == sym(3)?;
    let ok = a.1 == 0 && b.1 == 0 && c.1 == 0 && identity;
    Ok((
        ok,
        format!(
            "d^2 = 0 on coger {}/{}, adelta {}/{}, braidce {}/{} (arity <= 5, length <= {}); dI(w12 in coGer(4)) = I(w12 in coGer(3)): {identity}",
            a.0 - a.1,
            a.0,
            b.0 - b.1,
            b.0,
            c.0 - c.1,
            c.0,
            braid_caps.max_length
        ),
    ))
}

fn pentagon(_: Level) -> Outcome {
    let ctx = BraidContext::new(BraidCaps::default());
    let dims: Vec<usize> = (1..=4)
        .map(|w| pentagon_solutions(&ctx, w).map(|v| v.len()))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    let xy = Poly::letter(0).bracket(&Poly::letter(1));
    let closed = pentagon_apply(&ctx, &xy, 2).map_err(err)?.is_zero();
    Ok((
        dims == [0, 1, 1, 0] && closed,
        format!("kernel dims {dims:?}, pentagon([x,y]) = 0: {closed}"),
    ))
}

fn transport(_: Level) -> Outcome {
    let ctx = BraidContext::new(BraidCaps::default());
    let br = ctx
        .bracket(&ctx.gen(3, 1, 3).map_err(err)?, &ctx.gen(3, 2, 3).map_err(err)?)
        .map_err(err)?;
    let wedge = CeChain::from_element(&ctx.gen(4, 1, 3).map_err(err)?)
        .wedge(&CeChain::from_element(&ctx.gen(4, 2, 4).map_err(err)?));
    let mut target = TotChain::new();
    target.insert(3, CeChain::from_element(&br));
    target.insert(4, wedge);
    let primitive = tot_primitive(&ctx, &target, 5).map_err(err)?;
    let cohomologous = match &primitive {
        Some(phi) => total_differential(&ctx, phi).map_err(err)? == target,
        None => false,
    };
    let probes: Vec<bool> = [(3, 1, 1), (4, 1, 2)]
        .iter()
        .map(|&(n, l, p)| exactness_probe(&ctx, n, l, p).map(|v| v.vanishes))
        .collect::<Result<_, _>>()
        .map_err(err)?;
    let ok = cohomologous && probes.iter().all(|&x| x);
    Ok((
        ok,
        format!("[t13,t23] ~ -t13^t24 via exact primitive: {cohomologous}; exactness probes {probes:?}"),
    ))
}

fn surjectivity(_: Level) -> Outcome {
    let caps = WeightCaps::default();
    let coger = handle_coger(caps);
    let adelta = handle_adelta(caps);
    let mut kinds: std::collections::BTreeMap<&'static str, usize> = Default::default();
    let mut ok = true;
    for n in 4..=5 {
        let primes = enumerate_p(n);
        for l in enumerate_l(n).into_iter().filter(|l| !primes.contains(l)) {
            let cert = decompose_bracketing(&coger, &l).map_err(err)?;
            let alpha = alpha_of(&l).map_err(err)?;
            ok &= cert.decomposes() && verify_certificate(&coger, &alpha, &cert).map_err(err)?;
            *kinds.entry(cert.kind()).or_default() += 1;
        }
    }
    let incl = arnold_inclusion(&adelta, &coger);
    let map = induced_map(&adelta, &coger, &incl, &[2, 3], ShuffleMode::Covering).map_err(err)?;
    let mut maps = Vec::new();
    for r in &map.weights {
        ok &= r.intertwines && r.surjective();
        maps.push(format!("w={} {}->{} rank {}", r.weight, r.src_dim, r.dst_dim, r.rank));
    }
    Ok((
        ok,
        format!("certificates {kinds:?}; q_h0 adelta -> coger: {}", maps.join(", ")),
    ))
}

fn injectivity(_: Level) -> Outcome {
    let coger = handle_coger(WeightCaps::default());
    let ctx = BraidContext::new(BraidCaps::default());
    let mut ok = true;
    let mut parts = Vec::new();
    for w in [2, 3] {
        let v = grt_image_check(&coger, &ctx, w, ShuffleMode::Covering).map_err(err)?;
        ok &= v.injective();
        parts.push(format!(
            "w={w}: {} class(es), paired with cocycles rank {}, rank in q_h0 {} of dim {}",
            v.classes, v.pairing_rank, v.q_rank, v.q_dim
        ));
    }
    Ok((ok, parts.join("; ")))
}

fn euler(_: Level) -> Outcome {
    let adelta = handle_adelta(WeightCaps::default());
    let p = euler_probe(&adelta, ShuffleMode::Covering).map_err(err)?;
    Ok((
        true,
        format!(
            "{}: in h0 {} (residual {}), in q_h0 {} (residual {}); evidence only",
            p.label, p.in_h0, p.h0_residual, p.in_q, p.q_residual
        ),
    ))
}

fn primitive(candidates: &[Graph], target: &GraphElement, f: &dyn Fn(&GraphElement) -> GraphElement) -> bool {
    let mut index: Indexer<Graph> = Indexer::new();
    let mut vectorize = |e: &GraphElement| {
        let mut v = SparseVec::new();
        for (g, c) in &e.terms {
            add_entry(&mut v, index.intern(g), c.clone());
        }
        v
    };
    let images: Vec<SparseVec> = candidates
        .iter()
        .map(|g| vectorize(&f(&GraphElement::from_graph(g))))
        .collect();
    let t = vectorize(target);
    solve_combination(&images, &t).is_some()
}

fn graphs(level: Level) -> Outcome {
    let el = GraphElement::from_graph;
    let max_edges = if level == Level::Full { 5 } else { 4 };
    let mut census_size = 0;
    let mut squares = true;
    for w in 1..=3 {
        for b in 0..=2 {
            for g in census(w, b, max_edges) {
                squares &= tw_differential(&tw_differential(&el(&g))).is_zero();
                census_size += 1;
            }
        }
    }
    let t = el(&Graph::tripod());
    let tripod = tw_differential(&t).is_zero() && def_total_differential(&t).is_zero();
    let cp = el(&Graph::crossed_pair());
    let degree_zero: Vec<Graph> = (2..=4)
        .flat_map(|w| (0..=1).flat_map(move |b| census(w, b, 6)))
        .filter(|g| def_degree(g) == 0)
        .collect();
    let hochschild_exact = primitive(&degree_zero, &cp, &d_h);
    let internal: Vec<Graph> = (0..=2)
        .flat_map(|b| census(4, b, 6))
        .filter(|g| g.degree() == -3)
        .collect();
    let no_internal = !primitive(&internal, &cp, &tw_differential);
    let op = PolyOperator::new(3);
    let mut oracle = true;
    let mut compared = 0;
    for n in 1..=3 {
        for m in 1..=3 {
            if n + m - 1 > 4 {
                continue;
            }
            for f in census(n, 0, 3) {
                for g in census(m, 0, 3) {
                    for i in 1..=n {
                        let composite = g_compose(&f, i, &g).map_err(err)?;
                        let inputs: Vec<_> = (0..n + m - 1)
                            .map(|k| {
                                let a = k % 3 + 1;
                                op.x(a)
                                    .multiply(&op.eta(3 - k % 3))
                                    .unwrap()
                                    .multiply(&op.x(a))
                                    .unwrap()
                            })
                            .collect();
                        let lhs = op.apply(&composite, &inputs).map_err(err)?;
                        let rhs = compose_operators(&op, &el(&f), i, &el(&g), m, &inputs).map_err(err)?;
                        oracle &= lhs == rhs;
                        compared += 1;
                    }
                }
            }
        }
    }
    let ok = squares && tripod && hochschild_exact && no_internal && oracle;
    Ok((
        ok,
        format!(
            "d^2 = 0 on {census_size} graphs: {squares}; tripod cocycle: {tripod}; crossed pair d_H-exact: {hochschild_exact}, no internal primitive: {no_internal}; {compared} compositions match the d=3 operators: {oracle}"
        ),
    ))
}

fn numerics(_: Level) -> Outcome {
    let c = |ks: Vec<usize>| MzvComposition::new(ks).map_err(err);
    let z2 = zeta_numeric(&c(vec![2])?, 1e-10).value;
    let pi2 = std::f64::consts::PI.powi(2) / 6.0;
    let z3 = zeta_numeric(&c(vec![3])?, 1e-9).value;
    let z12 = zeta_numeric(&c(vec![1, 2])?, 1e-9).value;
    let ok = (z2 - pi2).abs() <= 1e-8 && (z12 - z3).abs() <= 1e-6;
    Ok((
        ok,
        format!(
            "|zeta(2) - pi^2/6| = {:.1e}; |zeta(1,2) - zeta(3)| = {:.1e}",
            (z2 - pi2).abs(),
            (z12 - z3).abs()
        ),
    ))
}
