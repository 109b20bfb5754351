//! Bisimulation verdicts against the reference oracles, and the algebraic
//! properties every mode must have.

mod support;

use std::collections::BTreeMap;

use nabla_pi::bisim::{check, replay, verify_certificate, Goal, Mode, Options};
use nabla_pi::{Distinction, Name, Process};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use support::*;

fn forall_env() -> BTreeMap<String, Name> {
    POOL.iter().enumerate().map(|(i, n)| (n.to_string(), Name::eigen(i as u32 + 1, 0))).collect()
}

fn goal(p: &T, q: &T, env: &BTreeMap<String, Name>, depth: u32) -> Goal {
    Goal { depth, distinction: Distinction::default(), left: to_process(p, env), right: to_process(q, env) }
}

fn verdict(g: &Goal, mode: Mode) -> bool {
    let opts = Options::new(mode);
    let r = check(g, &opts).unwrap();
    match &r.witness {
        Some(w) => replay(w, &opts).unwrap(),
        None => assert!(verify_certificate(&r.goal, r.certificate.as_ref().unwrap(), &opts)),
    }
    r.bisimilar()
}

fn pairs(seed: u64, n: usize, prefixes: usize) -> Vec<(T, T)> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let k = rng.gen_range(0..=prefixes);
            let p = random_term(&mut rng, k, &POOL);
            let q = variant(&mut rng, &p, &POOL);
            (p, q)
        })
        .collect()
}

#[test]
fn late_and_early_match_ground_oracle() {
    let env = nabla_env(&POOL);
    let mut seen = [0usize; 2];
    for (p, q) in pairs(21, 1500, 4) {
        let g = goal(&p, &q, &env, 3);
        let late = verdict(&g, Mode::Late);
        assert_eq!(late, ground_bisim(&p, &q, Ground::Late), "late: {p} vs {q}");
        assert_eq!(verdict(&g, Mode::Early), ground_bisim(&p, &q, Ground::Early), "early: {p} vs {q}");
        seen[late as usize] += 1;
    }
    assert!(seen[0] > 100 && seen[1] > 100, "corpus should mix verdicts: {seen:?}");
}

#[test]
fn open_matches_closing_substitution_oracle() {
    let env = forall_env();
    for (p, q) in pairs(22, 800, 4) {
        let g = goal(&p, &q, &env, 0);
        assert_eq!(verdict(&g, Mode::Open), open_bisim(&p, &q, &Dist::new()), "{p} vs {q}");
    }
}

#[test]
fn open_with_mixed_prefix_and_distinction() {
    // forall a, nabla b, forall c: a is kept apart from b by the prefix
    let env: BTreeMap<String, Name> =
        [("a", Name::eigen(1, 0)), ("b", Name::Nabla(1)), ("c", Name::eigen(2, 1))].into_iter().map(|(k, v)| (k.to_string(), v)).collect();
    for (p, q) in pairs(23, 600, 4) {
        let mut g = goal(&p, &q, &env, 1);
        let induced: Dist = [dpair("a", "b")].into_iter().collect();
        assert_eq!(verdict(&g, Mode::Open), open_bisim(&p, &q, &induced), "{p} vs {q}");
        g.distinction = Distinction::new([(env["a"], env["c"])]).unwrap();
        let explicit: Dist = [dpair("a", "b"), dpair("a", "c")].into_iter().collect();
        assert_eq!(verdict(&g, Mode::Open), open_bisim(&p, &q, &explicit), "{p} vs {q} with a#c");
    }
}

#[test]
fn modes_are_nested() {
    let env = forall_env();
    let mut strict = [0usize; 2];
    for (p, q) in pairs(24, 800, 4) {
        let g = goal(&p, &q, &env, 0);
        let (o, l, e) = (verdict(&g, Mode::Open), verdict(&g, Mode::Late), verdict(&g, Mode::Early));
        assert!(!o || l, "open but not late: {p} vs {q}");
        assert!(!l || e, "late but not early: {p} vs {q}");
        strict[0] += usize::from(l && !o);
        strict[1] += usize::from(e && !l);
    }
    eprintln!("late but not open: {}, early but not late: {}", strict[0], strict[1]);
    assert!(strict[0] > 0, "the corpus should separate open from late");
}

#[test]
fn symmetric_and_reflexive() {
    let env = forall_env();
    for (p, q) in pairs(25, 400, 4) {
        for m in [Mode::Open, Mode::Late, Mode::Early] {
            let g = goal(&p, &q, &env, 0);
            let swapped = goal(&q, &p, &env, 0);
            assert_eq!(verdict(&g, m), verdict(&swapped, m), "{m:?}: {p} vs {q}");
            assert!(verdict(&goal(&p, &p, &env, 0), m));
        }
    }
}

#[test]
fn transitive_on_chains() {
    let env = forall_env();
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    let mut chains = 0;
    for _ in 0..600 {
        let k = rng.gen_range(0..=3);
        let a = random_term(&mut rng, k, &POOL);
        let b = variant(&mut rng, &a, &POOL);
        let c = variant(&mut rng, &b, &POOL);
        for m in [Mode::Open, Mode::Late, Mode::Early] {
            let ab = verdict(&goal(&a, &b, &env, 0), m);
            let bc = verdict(&goal(&b, &c, &env, 0), m);
            if ab && bc {
                chains += 1;
                assert!(verdict(&goal(&a, &c, &env, 0), m), "{m:?}: {a} ~ {b} ~ {c}");
            }
        }
    }
    assert!(chains > 100);
}

#[test]
fn nabla_for_forall_only_helps() {
    let mut rng = ChaCha8Rng::seed_from_u64(27);
    for (p, q) in pairs(28, 400, 4) {
        // all-forall prefix, then the same prefix with one name made nabla
        let k = rng.gen_range(0..3);
        let mut env = forall_env();
        let weak = goal(&p, &q, &env, 0);
        for (i, n) in POOL.iter().enumerate() {
            let name = if i == k { Name::Nabla(1) } else { Name::eigen(i as u32 + 1, u32::from(i > k)) };
            env.insert(n.to_string(), name);
        }
        let strong = goal(&p, &q, &env, 1);
        if verdict(&weak, Mode::Open) {
            assert!(verdict(&strong, Mode::Open), "{p} vs {q} with {} as nabla", POOL[k]);
        }
    }
}

#[test]
fn early_clause_collapses_in_open_mode() {
    let env = forall_env();
    for (p, q) in pairs(29, 600, 4) {
        let g = goal(&p, &q, &env, 0);
        let early = Options { early_clause: true, ..Options::new(Mode::Open) };
        assert_eq!(verdict(&g, Mode::Open), check(&g, &early).unwrap().bisimilar(), "{p} vs {q}");
    }
}

#[test]
fn canonical_goals_decide_alike() {
    let env = nabla_env(&POOL);
    for (p, q) in pairs(30, 300, 3) {
        let g = goal(&p, &q, &env, 3);
        let c = g.canonical();
        assert_eq!(c.canonical(), c);
        for m in [Mode::Open, Mode::Late] {
            assert_eq!(verdict(&g, m), verdict(&c, m));
        }
    }
}

#[test]
fn nil_is_unit_for_par_and_sum() {
    let env = forall_env();
    for (p, _) in pairs(31, 200, 4) {
        let q = to_process(&p, &env);
        for other in [Process::par(q.clone(), Process::Nil), Process::sum(Process::Nil, q.clone())] {
            let g = Goal { depth: 0, distinction: Distinction::default(), left: q.clone(), right: other };
            assert!(verdict(&g, Mode::Open), "{p}");
        }
    }
}
