//! Verification suites: the library's stated invariants re-checked against
//! independent oracles at run time, with deterministic machine-readable
//! reports. Each suite counts every individual check as a case and records
//! failures (capped) as input/expected/got triples.

use crate::CliError;
use clap::ValueEnum;
use poset_core::complex;
use poset_core::incidence::{self, MobiusTable};
use poset_core::layered::{self, LayerStructure};
use poset_core::ln::{self, LnElement};
use poset_core::poset::FinitePoset;
use poset_core::random;
use poset_core::surgery::{self, MDirection};
use serde::Serialize;
use std::collections::BTreeSet;
use std::time::Instant;

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
pub enum Suite {
    Mobius,
    Lattice,
    Surgery,
    Double,
    Topology,
    All,
}

#[derive(Serialize)]
struct FailureRecord {
    input: String,
    expected: String,
    got: String,
}

#[derive(Serialize)]
struct Report {
    suite: &'static str,
    cases: u64,
    failures: Vec<FailureRecord>,
    elapsed_ms: u128,
    #[serde(skip)]
    total_failures: u64,
}

const FAILURE_CAP: usize = 100;

struct SuiteRun {
    cases: u64,
    failures: Vec<FailureRecord>,
    total_failures: u64,
}

impl SuiteRun {
    fn new() -> SuiteRun {
        SuiteRun { cases: 0, failures: Vec::new(), total_failures: 0 }
    }

    // The description closures only run on failure, keeping the hot path to
    // a counter bump.
    fn check<I, E, G>(&mut self, ok: bool, input: I, expected: E, got: G)
    where
        I: FnOnce() -> String,
        E: FnOnce() -> String,
        G: FnOnce() -> String,
    {
        self.cases += 1;
        if !ok {
            self.total_failures += 1;
            if self.failures.len() < FAILURE_CAP {
                self.failures.push(FailureRecord {
                    input: input(),
                    expected: expected(),
                    got: got(),
                });
            }
        }
    }

    fn into_report(self, suite: &'static str, start: Instant) -> Report {
        Report {
            suite,
            cases: self.cases,
            failures: self.failures,
            elapsed_ms: start.elapsed().as_millis(),
            total_failures: self.total_failures,
        }
    }
}

/// Runs the selected suites and prints the merged report; returns the
/// process exit code (0 clean, 1 with failures).
pub fn run(suite: Suite, max_n: u32, seed: u64, json: bool) -> Result<u8, CliError> {
    let selected: Vec<Suite> = match suite {
        Suite::All => {
            vec![Suite::Double, Suite::Lattice, Suite::Mobius, Suite::Surgery, Suite::Topology]
        }
        s => vec![s],
    };
    let mut reports = Vec::new();
    for s in selected {
        reports.push(match s {
            Suite::Mobius => mobius_suite(max_n)?,
            Suite::Lattice => lattice_suite(max_n)?,
            Suite::Surgery => surgery_suite(max_n, seed)?,
            Suite::Double => double_suite(max_n, seed)?,
            Suite::Topology => topology_suite(max_n, seed)?,
            Suite::All => unreachable!(),
        });
    }
    // Merged deterministically by suite name; wall times go to stderr so
    // stdout is byte-identical across runs.
    reports.sort_by_key(|r| r.suite);
    for r in &reports {
        eprintln!("suite {} finished in {} ms", r.suite, r.elapsed_ms);
    }
    if json {
        println!(
            "{}",
            serde_json::to_string_pretty(&reports).expect("reports are plain data")
        );
    } else {
        for r in &reports {
            println!("suite {}: {} cases, {} failures", r.suite, r.cases, r.total_failures);
            for f in &r.failures {
                println!("  FAIL [{}]: expected {}, got {}", f.input, f.expected, f.got);
            }
            if r.total_failures > r.failures.len() as u64 {
                println!(
                    "  (+{} failures beyond the first {})",
                    r.total_failures - r.failures.len() as u64,
                    r.failures.len()
                );
            }
        }
    }
    Ok(if reports.iter().any(|r| r.total_failures > 0) { 1 } else { 0 })
}

/// Exhaustive oracles get expensive fast; each suite clamps `max_n` to the
/// largest size its oracles finish at desk scale.
fn clamp(suite: &'static str, max_n: u32, cap: u32) -> u32 {
    if max_n > cap {
        eprintln!("note: {suite} suite clamps max-n to {cap}");
        cap
    } else {
        max_n
    }
}

fn el(n: u32, bits: u64) -> LnElement {
    LnElement::new(n, bits).unwrap()
}

/// Mobius suite: closed form, interval recursion, and matrix inversion agree
/// on every ordered pair; the dual table is the transpose.
fn mobius_suite(max_n: u32) -> Result<Report, CliError> {
    let start = Instant::now();
    let max_n = clamp("mobius", max_n, 8);
    let mut run = SuiteRun::new();
    for n in 1..=max_n {
        let p = ln::build_ln(n)?;
        let inv = incidence::mobius_by_inversion(&p)?;
        let inv_dual = incidence::mobius_by_inversion(&p.dual())?;
        for s_bits in 0..1u64 << n {
            let s = el(n, s_bits);
            for t_bits in 0..1u64 << n {
                let t = el(n, t_bits);
                let closed = s.mobius(&t);
                let rec = s.mobius_recursive(&t);
                let tab = inv.get(s_bits as usize, t_bits as usize);
                let dual = inv_dual.get(t_bits as usize, s_bits as usize);
                run.check(
                    closed == rec && closed == tab && closed == dual,
                    || format!("n={n} S={s} T={t}"),
                    || format!("mu={closed} on every route"),
                    || format!("recursive={rec} inversion={tab} dual-transpose={dual}"),
                );
            }
        }
    }
    Ok(run.into_report("mobius", start))
}

/// Lattice suite: order-definition equivalence, join/meet against exhaustive
/// scans, modularity, complementation as stated, uniqueness of complements,
/// projection coherence, and gradedness.
fn lattice_suite(max_n: u32) -> Result<Report, CliError> {
    let start = Instant::now();
    let max_n = clamp("lattice", max_n, 7);
    let mut run = SuiteRun::new();
    for n in 1..=max_n {
        let p = ln::build_ln(n)?;
        let size = 1usize << n;
        let full = el(n, (1u64 << n) - 1);
        let empty = el(n, 0);

        // Transitive closure of single slides, and per-target reachability.
        let mut slide_edges = Vec::new();
        for t in 0..size {
            for s in el(n, t as u64).slides() {
                slide_edges.push((s.bits() as usize, t));
            }
        }
        let labels = (0..size).map(|b| el(n, b as u64).to_string()).collect();
        let by_closure = FinitePoset::from_cover_relations(labels, &slide_edges)?;
        let mut reach = vec![vec![false; size]; size];
        for t in 0..size {
            let row = &mut reach[t];
            row[t] = true;
            let mut queue = vec![el(n, t as u64)];
            while let Some(x) = queue.pop() {
                for y in x.slides() {
                    if !row[y.bits() as usize] {
                        row[y.bits() as usize] = true;
                        queue.push(y);
                    }
                }
            }
        }

        let maps = layered::property_m_maps(&p, &ln::natural_layer(n));
        run.check(
            maps.is_ok(),
            || format!("n={n} natural layer"),
            || "property (M) maps exist".to_string(),
            || format!("{:?}", maps.as_ref().err()),
        );

        for s_bits in 0..size as u64 {
            let a = el(n, s_bits);
            let c = a.sigma();
            run.check(
                a.join(&c) == full && a.meet(&c) == empty,
                || format!("n={n} S={a} complementation"),
                || format!("S v sigma(S) = {full}, S ^ sigma(S) = {empty}"),
                || format!("join={} meet={}", a.join(&c), a.meet(&c)),
            );
            run.check(
                a.rank() + c.rank() == u64::from(n) * u64::from(n + 1) / 2,
                || format!("n={n} S={a} rank sum"),
                || format!("rank(S) + rank(sigma(S)) = {}", n * (n + 1) / 2),
                || format!("{} + {}", a.rank(), c.rank()),
            );
            if let Ok(maps) = &maps {
                run.check(
                    maps.m_plus[s_bits as usize] == a.m_plus().bits() as usize
                        && maps.m_minus[s_bits as usize] == a.m_minus().bits() as usize,
                    || format!("n={n} S={a} projection coherence"),
                    || format!("layer maps give m+={} m-={}", a.m_plus(), a.m_minus()),
                    || {
                        format!(
                            "m+={} m-={}",
                            el(n, maps.m_plus[s_bits as usize] as u64),
                            el(n, maps.m_minus[s_bits as usize] as u64)
                        )
                    },
                );
            }
            run.check(
                a.sigma().m_plus() == a.m_minus().sigma()
                    && a.sigma().m_minus() == a.m_plus().sigma(),
                || format!("n={n} S={a} projection-selfduality interchange"),
                || "m+- of sigma(S) = sigma of m-+ of S".to_string(),
                || {
                    format!(
                        "m+(sigma)={} sigma(m-)={} m-(sigma)={} sigma(m+)={}",
                        a.sigma().m_plus(),
                        a.m_minus().sigma(),
                        a.sigma().m_minus(),
                        a.m_plus().sigma()
                    )
                },
            );
        }

        if n >= 2 {
            let one = el(n, 0b01);
            let two = el(n, 0b10);
            run.check(
                one.leq(&two),
                || format!("n={n} monotone-converse witness"),
                || "{1} <= {2} although {1} is not a subset of {2}".to_string(),
                || "not comparable".to_string(),
            );
        }

        for s_bits in 0..size as u64 {
            let a = el(n, s_bits);
            for t_bits in 0..size as u64 {
                let b = el(n, t_bits);
                let (s, t) = (s_bits as usize, t_bits as usize);
                run.check(
                    a.leq(&b) == by_closure.leq(s, t) && a.leq(&b) == reach[t][s],
                    || format!("n={n} S={a} T={b} order equivalence"),
                    || format!("counting order {}", a.leq(&b)),
                    || format!("slide closure {}, reachability {}", by_closure.leq(s, t), reach[t][s]),
                );
                let join = a.join(&b);
                let meet = a.meet(&b);
                run.check(
                    join == a.join_extremes(&b)
                        && meet == a.meet_extremes(&b)
                        && p.join(s, t) == Some(join.bits() as usize)
                        && p.meet(s, t) == Some(meet.bits() as usize),
                    || format!("n={n} S={a} T={b} join/meet routes"),
                    || format!("join={join} meet={meet} on every route"),
                    || {
                        format!(
                            "extremes join={} meet={}, scans join={:?} meet={:?}",
                            a.join_extremes(&b),
                            a.meet_extremes(&b),
                            p.join(s, t),
                            p.meet(s, t)
                        )
                    },
                );
                run.check(
                    join.rank() + meet.rank() == a.rank() + b.rank(),
                    || format!("n={n} S={a} T={b} modularity"),
                    || format!("rank sum {}", a.rank() + b.rank()),
                    || format!("{} + {}", join.rank(), meet.rank()),
                );
                if join == full && meet == empty {
                    run.check(
                        b == a.sigma(),
                        || format!("n={n} S={a} T={b} complement uniqueness"),
                        || format!("T = sigma(S) = {}", a.sigma()),
                        || format!("T = {b}"),
                    );
                }
                if s_bits & !t_bits == 0 {
                    run.check(
                        a.leq(&b),
                        || format!("n={n} S={a} T={b} subset monotonicity"),
                        || "S subset of T implies S <= T".to_string(),
                        || "not below".to_string(),
                    );
                }
                if a.is_elementary_pair(&b) {
                    let diff = b.bits().count_ones() as i64 - a.bits().count_ones() as i64;
                    run.check(
                        diff == 0 || diff == 1,
                        || format!("n={n} S={a} T={b} elementary cardinality"),
                        || "size difference in {0, 1}".to_string(),
                        || diff.to_string(),
                    );
                }
            }
        }

        if n <= 6 {
            let ranks = p.grading();
            run.check(
                ranks.is_ok(),
                || format!("n={n} gradedness"),
                || "a rank function exists".to_string(),
                || format!("{:?}", ranks.as_ref().err()),
            );
            if let Ok(ranks) = ranks {
                for x in 0..size {
                    run.check(
                        ranks.values[x] == el(n, x as u64).rank() as i64,
                        || format!("n={n} S={} rank value", el(n, x as u64)),
                        || el(n, x as u64).rank().to_string(),
                        || ranks.values[x].to_string(),
                    );
                }
                for x in 0..size {
                    for y in 0..size {
                        if !p.lt(x, y) {
                            continue;
                        }
                        let d = (el(n, y as u64).rank() - el(n, x as u64).rank()) as usize;
                        let range = p.chain_length_range(x, y);
                        run.check(
                            range == Some((d, d)),
                            || {
                                format!(
                                    "n={n} S={} T={} maximal chain lengths",
                                    el(n, x as u64),
                                    el(n, y as u64)
                                )
                            },
                            || format!("all equal to {d}"),
                            || format!("{range:?}"),
                        );
                    }
                }
            }
        }
    }
    Ok(run.into_report("lattice", start))
}

/// Surgery suite: seeded random hosts glued along embedded subposets; block
/// formula against inversion, projection-condition consistency, the bridge
/// identity, the closed form, and the stated range containment.
fn surgery_suite(max_n: u32, seed: u64) -> Result<Report, CliError> {
    let start = Instant::now();
    let mut run = SuiteRun::new();
    let trials = 40 * u64::from(max_n.max(1));
    let mut rng = random::seeded_rng(seed);
    for trial in 0..trials {
        let (p0, p1, q, i0, i1) = random::random_embedding_pair(&mut rng, 4, 8);
        let e = match surgery::EmbeddedSubposet::new(q.clone(), i0, i1, &p0, &p1) {
            Ok(e) => e,
            Err(err) => {
                run.check(
                    false,
                    || format!("trial {trial} embedding"),
                    || "generator produces valid embeddings".to_string(),
                    || err.to_string(),
                );
                continue;
            }
        };
        let (glued, bridge) = surgery::connect_sum(&p0, &p1, &e)?;
        let inv = incidence::mobius_by_inversion(&glued)?;
        let block = surgery::mobius_conn_sum(&p0, &p1, &e)?;
        run.check(
            block == inv,
            || format!("trial {trial} block formula"),
            || "block table equals inversion".to_string(),
            || first_diff(&block, &inv, &glued),
        );
        let (m0, m1) = (p0.len(), p1.len());
        run.check(
            (0..m1).all(|i| (0..m0).all(|j| !glued.leq(m0 + i, j))),
            || format!("trial {trial} orientation"),
            || "no comparability from the upper host to the lower".to_string(),
            || "backward relation found".to_string(),
        );

        let plus = surgery::check_m_conditions(&p0, &e.i0, MDirection::Plus);
        let minus = surgery::check_m_conditions(&p1, &e.i1, MDirection::Minus);
        if let Ok(map) = &plus {
            let ok = (0..m0).all(|x| {
                e.i0.iter().all(|&u| {
                    p0.leq(x, u) == map.get(&x).is_some_and(|&qx| p0.leq(qx, u))
                })
            });
            run.check(
                ok,
                || format!("trial {trial} (M+) consistency"),
                || "x <= y iff q_x <= y on the glue image".to_string(),
                || "equivalence fails".to_string(),
            );
        }
        if let Ok(map) = &minus {
            let ok = (0..m1).all(|y| {
                e.i1.iter().all(|&u| {
                    p1.leq(u, y) == map.get(&y).is_some_and(|&qy| p1.leq(u, qy))
                })
            });
            run.check(
                ok,
                || format!("trial {trial} (M-) consistency"),
                || "y >= u iff q^y >= u on the glue image".to_string(),
                || "equivalence fails".to_string(),
            );
        }
        if let (Ok(plus_map), Ok(minus_map)) = (&plus, &minus) {
            // Bridge identity: the cross indicator factors through either
            // projection wherever the projection is defined.
            let mut ok = true;
            for x in 0..m0 {
                for y in 0..m1 {
                    if let Some(&qx) = plus_map.get(&x) {
                        let pos = e.i0.iter().position(|&v| v == qx).unwrap();
                        ok &= bridge.get(x, y) == p1.leq(e.i1[pos], y);
                    }
                    if let Some(&qy) = minus_map.get(&y) {
                        let pos = e.i1.iter().position(|&v| v == qy).unwrap();
                        ok &= bridge.get(x, y) == p0.leq(x, e.i0[pos]);
                    }
                }
            }
            run.check(
                ok,
                || format!("trial {trial} bridge identity"),
                || "bridge factors through both projections".to_string(),
                || "factorization fails".to_string(),
            );

            let closed = surgery::mobius_cross_closed_form(&p0, &p1, &e)?;
            run.check(
                closed == inv,
                || format!("trial {trial} closed form"),
                || "closed-form table equals inversion".to_string(),
                || first_diff(&closed, &inv, &glued),
            );
            if e.q.len() == 1 {
                let (q0, q1) = (e.i0[0], m0 + e.i1[0]);
                let ok = (0..m0).all(|x| {
                    (m0..m0 + m1).all(|y| {
                        inv.get(x, y) == if (x, y) == (q0, q1) { -1 } else { 0 }
                    })
                });
                run.check(
                    ok,
                    || format!("trial {trial} single-point glue"),
                    || "one cross entry of -1 at the glue pair".to_string(),
                    || "cross block differs".to_string(),
                );
            }
            let mut allowed: BTreeSet<i64> =
                incidence::mobius_by_inversion(&p0)?.value_range();
            allowed.extend(incidence::mobius_by_inversion(&p1)?.value_range());
            allowed.extend(incidence::mobius_by_inversion(&e.q)?.value_range());
            allowed.insert(0);
            let bad: Vec<i64> =
                inv.value_range().into_iter().filter(|v| !allowed.contains(v)).collect();
            run.check(
                bad.is_empty(),
                || format!("trial {trial} range containment"),
                || format!("glued values inside {allowed:?}"),
                || format!("extra values {bad:?}"),
            );
        }
    }
    Ok(run.into_report("surgery", start))
}

fn first_diff(a: &MobiusTable, b: &MobiusTable, p: &FinitePoset) -> String {
    for x in 0..p.len() {
        for y in 0..p.len() {
            if a.get(x, y) != b.get(x, y) {
                return format!(
                    "first difference at ({}, {}): {} vs {}",
                    p.label(x),
                    p.label(y),
                    a.get(x, y),
                    b.get(x, y)
                );
            }
        }
    }
    "tables agree".to_string()
}

/// Double suite: layer validation, copy restrictions, property (M) and its
/// transported maps, the closed-form double Mobius table, and the doubling
/// isomorphism onto the next lattice.
fn double_suite(max_n: u32, seed: u64) -> Result<Report, CliError> {
    let start = Instant::now();
    let max_n = clamp("double", max_n, 7);
    let mut run = SuiteRun::new();

    for n in 1..=max_n {
        let p = ln::build_ln(n)?;
        let layer = ln::natural_layer(n);
        let (doubled, canonical) = layered::double(&p, &layer)?;
        let m = p.len();
        check_layered_poset(&mut run, &format!("L{n} double"), &p, &layer, &doubled, &canonical);

        // The canonical layer is the tautological one on two stacked copies.
        let tautological = LayerStructure::product_style(m);
        run.check(
            canonical.sign == tautological.sign && canonical.lift == tautological.lift,
            || format!("L{n} canonical layer"),
            || "tautological sign and lift".to_string(),
            || format!("sign={:?} lift={:?}", canonical.sign, canonical.lift),
        );

        let next = ln::build_ln(n + 1)?;
        let md = layered::mobius_double(&p, &layer)?;
        let mut transport = None;
        'outer: for x in 0..2 * m {
            for y in 0..2 * m {
                let direct = el(n + 1, x as u64).mobius(&el(n + 1, y as u64));
                if md.get(x, y) != direct {
                    transport = Some((x, y, md.get(x, y), direct));
                    break 'outer;
                }
            }
        }
        run.check(
            transport.is_none(),
            || format!("L{n} transport to L{}", n + 1),
            || "doubled table matches the closed form upstairs".to_string(),
            || format!("{transport:?}"),
        );

        let found = doubled.find_isomorphism(&next);
        let canonical_map: Vec<usize> = (0..doubled.len()).collect();
        run.check(
            found.as_ref().is_some_and(|f| doubled.verify_isomorphism(&next, f))
                && doubled.verify_isomorphism(&next, &canonical_map),
            || format!("L{n} doubling isomorphism"),
            || format!("double of L{n} is L{}", n + 1),
            || format!("search result {found:?}"),
        );
    }

    let mut rng = random::seeded_rng(seed);
    for trial in 0..10 * u64::from(max_n.max(1)) {
        let (l, layer) = random::random_layered_poset(&mut rng, 6);
        match layered::double(&l, &layer) {
            Ok((doubled, canonical)) => {
                check_layered_poset(
                    &mut run,
                    &format!("trial {trial}"),
                    &l,
                    &layer,
                    &doubled,
                    &canonical,
                );
            }
            Err(err) => run.check(
                false,
                || format!("trial {trial} double"),
                || "generator layers double cleanly".to_string(),
                || err.to_string(),
            ),
        }
    }
    Ok(run.into_report("double", start))
}

/// Shared checks for one layered poset and its double: layer validity, copy
/// restrictions, and the property-(M) family when the projections exist.
fn check_layered_poset(
    run: &mut SuiteRun,
    tag: &str,
    p: &FinitePoset,
    layer: &LayerStructure,
    doubled: &FinitePoset,
    canonical: &LayerStructure,
) {
    let m = p.len();
    run.check(
        layered::validate_layer(doubled, canonical).is_ok(),
        || format!("{tag} canonical layer validity"),
        || "layer axioms hold on the double".to_string(),
        || format!("{:?}", layered::validate_layer(doubled, canonical).err()),
    );
    let identity: Vec<usize> = (0..m).collect();
    let lower_copy = doubled.induced(&identity);
    let upper_idx: Vec<usize> = (m..2 * m).collect();
    let upper_copy = doubled.induced(&upper_idx);
    run.check(
        lower_copy.verify_isomorphism(p, &identity) && upper_copy.verify_isomorphism(p, &identity),
        || format!("{tag} copy restrictions"),
        || "both copies restrict to the original order".to_string(),
        || "restriction differs".to_string(),
    );

    let maps = match layered::property_m_maps(p, layer) {
        Ok(maps) => maps,
        // Property (M) is a genuine hypothesis; layers without it are not
        // failures, they just skip the dependent checks.
        Err(_) => return,
    };
    let upper_of = |x: usize| layer.sign[x] == 1;
    run.check(
        (0..m).all(|x| {
            upper_of(maps.m_plus[x])
                && !upper_of(maps.m_minus[x])
                && maps.m_plus[maps.m_plus[x]] == maps.m_plus[x]
                && maps.m_minus[maps.m_minus[x]] == maps.m_minus[x]
                && p.leq(x, maps.m_plus[x])
                && p.leq(maps.m_minus[x], x)
        }),
        || format!("{tag} projection idempotence"),
        || "m+ and m- are idempotent retractions onto their layers".to_string(),
        || "projection laws fail".to_string(),
    );
    run.check(
        (0..m).all(|x| {
            (0..m).all(|y| {
                if upper_of(x) || !upper_of(y) {
                    return true;
                }
                p.lt(x, y) == (p.leq(x, maps.m_minus[y]) && p.leq(maps.m_plus[x], y))
            })
        }),
        || format!("{tag} projection equivalence"),
        || "x < y iff x <= m-(y) and m+(x) <= y across layers".to_string(),
        || "equivalence fails".to_string(),
    );
    match layered::double_property_m(p, layer) {
        Ok(doubled_maps) => {
            let direct = layered::property_m_maps(doubled, canonical);
            run.check(
                direct.as_ref().is_ok_and(|d| {
                    d.m_plus == doubled_maps.m_plus && d.m_minus == doubled_maps.m_minus
                }),
                || format!("{tag} transported projections"),
                || "index formulas match the recomputed maps".to_string(),
                || "maps differ".to_string(),
            );
        }
        Err(err) => run.check(
            false,
            || format!("{tag} transported projections"),
            || "the double inherits property (M)".to_string(),
            || err.to_string(),
        ),
    }
    match (layered::mobius_double(p, layer), incidence::mobius_by_inversion(doubled)) {
        (Ok(closed), Ok(inv)) => run.check(
            closed == inv,
            || format!("{tag} double Mobius closed form"),
            || "closed form equals inversion".to_string(),
            || first_diff(&closed, &inv, doubled),
        ),
        (closed, inv) => run.check(
            false,
            || format!("{tag} double Mobius closed form"),
            || "both routes computable".to_string(),
            || format!("closed {:?}, inversion {:?}", closed.err(), inv.err()),
        ),
    }
}

/// Topology suite: Hall's identity on small open intervals, contractibility
/// and sphere Euler characteristics on the lattice, the boolean-interval
/// isomorphism, and nerve invariance under duality.
fn topology_suite(max_n: u32, seed: u64) -> Result<Report, CliError> {
    let start = Instant::now();
    let max_n = clamp("topology", max_n, 6);
    let mut run = SuiteRun::new();
    for n in 1..=max_n {
        let p = ln::build_ln(n)?;
        for s_bits in 0..1u64 << n {
            let a = el(n, s_bits);
            for t_bits in 0..1u64 << n {
                let b = el(n, t_bits);
                if !a.lt(&b) {
                    continue;
                }
                let (s, t) = (s_bits as usize, t_bits as usize);
                let (open_sub, open_elems) = p.interval(s, t, true)?;
                if open_elems.len() <= 20 {
                    let hc = incidence::hall_check(&p, s, t)?;
                    run.check(
                        hc.ok && hc.mu == a.mobius(&b),
                        || format!("n={n} S={a} T={b} Hall identity"),
                        || format!("chi = 1 + mu = {}", 1 + a.mobius(&b)),
                        || format!("chi={} mu={}", hc.chi, hc.mu),
                    );
                }
                let chi = complex::chain_count_euler(&open_sub)?;
                if a.is_elementary_pair(&b) {
                    let d = b.rank() - a.rank();
                    if d >= 2 {
                        let expected = 1 + if d.is_multiple_of(2) { 1 } else { -1 };
                        run.check(
                            chi == expected,
                            || format!("n={n} S={a} T={b} sphere characteristic"),
                            || expected.to_string(),
                            || chi.to_string(),
                        );
                    }
                    let ok = match ln::boole_interval_iso(&a, &b) {
                        Ok(list) => {
                            let (closed_sub, closed_elems) = p.interval(s, t, false)?;
                            let cube = ln::boolean_poset(d as u32);
                            let mut map = vec![usize::MAX; closed_elems.len()];
                            let mut total = true;
                            for (e, coords) in &list {
                                match closed_elems.binary_search(&(e.bits() as usize)) {
                                    Ok(pos) => map[pos] = *coords as usize,
                                    Err(_) => total = false,
                                }
                            }
                            total && closed_sub.verify_isomorphism(&cube, &map)
                        }
                        Err(_) => false,
                    };
                    run.check(
                        ok,
                        || format!("n={n} S={a} T={b} boolean coordinates"),
                        || format!("closed interval is a rank-{d} cube"),
                        || "isomorphism fails".to_string(),
                    );
                } else {
                    run.check(
                        chi == 1,
                        || format!("n={n} S={a} T={b} contractibility"),
                        || "chi = 1".to_string(),
                        || chi.to_string(),
                    );
                }
            }
        }
    }

    let mut rng = random::seeded_rng(seed);
    for trial in 0..10 * u64::from(max_n.max(1)) {
        let p = random::random_poset(&mut rng, 10);
        for x in 0..p.len() {
            for y in 0..p.len() {
                if !p.lt(x, y) {
                    continue;
                }
                let (_, open_elems) = p.interval(x, y, true)?;
                if open_elems.len() <= 20 {
                    let hc = incidence::hall_check(&p, x, y)?;
                    run.check(
                        hc.ok,
                        || format!("trial {trial} ({x}, {y}) Hall identity"),
                        || format!("chi = 1 + mu = {}", 1 + hc.mu),
                        || format!("chi={}", hc.chi),
                    );
                }
            }
        }
        let nerve = complex::nerve(&p, crate::FACE_CAP)?;
        let dual_nerve = complex::nerve(&p.dual(), crate::FACE_CAP)?;
        run.check(
            nerve.faces == dual_nerve.faces,
            || format!("trial {trial} nerve duality"),
            || "identical face families".to_string(),
            || "face families differ".to_string(),
        );
    }
    Ok(run.into_report("topology", start))
}
