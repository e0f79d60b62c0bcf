//! End-to-end acceptance checks, one line per criterion.

use std::collections::BTreeSet;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zxp::cyclo::{quadratic_gauss_sum, sqrt_p_pow};
use zxp::graphstate::{dressed_diagram, pauli_stabiliser_diagram, rewrite_local, to_diagram, LocalOp, WeightedGraph};
use zxp::interp::{double, interp, interp_cpm, interp_raw, interp_scalar};
use zxp::modp::legendre;
use zxp::normalize::{c1_classes, c1_normalize, decide_equal, scalar_normal_form, with_scalar, ScalarNf};
use zxp::relsem::{rel_compose, rel_interp};
use zxp::rules::{catalogue, colour_change_meta, gates, random_diagram, random_rewrites, soundcheck, RandomSpec, RuleClass};
use zxp::{Colour, Cyclo, CycloMatrix, Diagram, Phase, Prime, VertexKind, Zp};

type Outcome = Result<String, String>;

fn pr(p: u64) -> Prime {
    Prime::new(p).unwrap()
}

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(start: Instant, limit: Duration) -> Result<(), String> {
    ensure(start.elapsed() < limit, || format!("took {:.1?}, limit {limit:?}", start.elapsed()))
}

fn soundness() -> Outcome {
    let start = Instant::now();
    let primes = [pr(3), pr(5), pr(7)];
    let reports = soundcheck(&[], &primes, 100, 0, false).map_err(|e| e.to_string())?;
    let bad: Vec<String> = reports
        .iter()
        .filter(|r| r.failed > 0 || r.passed < 100)
        .map(|r| format!("{} p={} {}/{}", r.rule, r.p, r.passed, r.passed + r.failed))
        .collect();
    ensure(bad.is_empty(), || bad.join("; "))?;
    ensure(reports.len() == catalogue().len() * 3, || "missing reports".into())?;
    within(start, Duration::from_secs(300))?;
    Ok(format!("{} rules x 3 primes x 100 instances in {:.1?}", catalogue().len(), start.elapsed()))
}

/// Divide by the first nonzero entry.
fn projective_key(m: &CycloMatrix) -> String {
    let k = m.entries.iter().find(|x| !x.is_zero()).expect("nonzero").inv_unit().expect("unit");
    m.scalar_mul(&k).to_string()
}

fn c1_count() -> Outcome {
    let start = Instant::now();
    let p = pr(3);
    let classes = c1_classes(p);
    ensure(classes.len() == 216, || format!("{} classes", classes.len()))?;
    let mut keys = BTreeSet::new();
    for f in &classes {
        keys.insert(projective_key(&interp(&f.to_diagram()).map_err(|e| e.to_string())?));
        let again = c1_normalize(p, &f.word());
        ensure(again.key() == f.key() && again.scalar.is_one(), || format!("not idempotent on {f}"))?;
    }
    ensure(keys.len() == 216, || format!("{} distinct matrices up to scalar", keys.len()))?;
    within(start, Duration::from_secs(60))?;
    Ok(format!("216 classes, pairwise distinct, idempotent, {:.1?}", start.elapsed()))
}

fn small_diagram(p: Prime, wires: usize, inputs: usize, rng: &mut ChaCha8Rng) -> Diagram {
    let spec = RandomSpec {
        spiders: rng.gen_range(1..=12 - wires),
        inputs,
        outputs: wires - inputs,
        extra_edges: rng.gen_range(0..4),
    };
    random_diagram(p, spec, rng)
}

fn equality() -> Outcome {
    let start = Instant::now();
    let p = pr(3);
    let one = Cyclo::one(p);
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let (mut agree, mut truly_equal) = (0, 0);
    for k in 0..200 {
        let wires = rng.gen_range(0..=3);
        let inputs = rng.gen_range(0..=wires);
        let a = small_diagram(p, wires, inputs, &mut rng);
        let b = if k % 2 == 0 {
            let st = random_rewrites(&a, 20, 12, &mut rng);
            with_scalar(&st.graph, &st.scalar).map_err(|e| e.to_string())?
        } else {
            small_diagram(p, wires, inputs, &mut rng)
        };
        let truth = interp_raw(&a).unwrap().scaled_eq(&one, &interp_raw(&b).unwrap(), &one);
        ensure(k % 2 == 1 || truth, || format!("pair {k}: rewrites changed the interpretation"))?;
        let got = decide_equal(&a, &b).map_err(|e| format!("pair {k}: {e}"))?.equal;
        if got == truth {
            agree += 1;
        }
        truly_equal += truth as usize;
    }
    ensure(agree == 200, || format!("{agree}/200 agree"))?;
    within(start, Duration::from_secs(600))?;
    Ok(format!("200/200 agree ({truly_equal} equal), {:.1?}", start.elapsed()))
}

fn random_graph(p: Prime, n: usize, rng: &mut ChaCha8Rng) -> WeightedGraph {
    let mut g = WeightedGraph::empty(p, n);
    for u in 0..n {
        for v in u + 1..n {
            g.set(u, v, p.zp(rng.gen_range(0..p.get() as i64)));
        }
    }
    g
}

fn graph_states() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let mut checks = 0;
    for p in [pr(3), pr(5)] {
        for n in 1..=4 {
            for _ in 0..3 {
                let g = random_graph(p, n, &mut rng);
                let want = interp(&to_diagram(&g)).unwrap();
                for w in 0..n {
                    for gamma in p.units() {
                        let x = p.zp(rng.gen_range(0..p.get() as i64));
                        let ops = [
                            LocalOp::Multiplier(gamma),
                            LocalOp::Complement(gamma),
                            LocalOp::RedPhase(Phase::new(x, gamma)),
                        ];
                        for op in ops {
                            let lhs = interp(&dressed_diagram(&g, w, op).unwrap()).unwrap();
                            let h = rewrite_local(&g, w, op).unwrap();
                            let rhs = interp(&to_diagram(&h)).unwrap();
                            ensure(lhs == rhs, || format!("{op:?} at {w} on\n{g}"))?;
                            checks += 1;
                        }
                        let st = interp(&pauli_stabiliser_diagram(&g, w, gamma).unwrap()).unwrap();
                        ensure(st == want, || format!("stabiliser {w} {gamma} on\n{g}"))?;
                        checks += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{checks} exact checks"))
}

fn gauss_sums() -> Outcome {
    for p in [3u64, 5, 7, 11, 13] {
        let p = pr(p);
        let h = zxp::modp::half(p);
        let pc = Cyclo::from_int(p, p.get() as i64);
        let unit1 = &quadratic_gauss_sum(p.one()).unwrap() * &sqrt_p_pow(p, -1);
        for z in p.units() {
            let brute = p.elements().fold(Cyclo::zero(p), |acc, j| &acc + &Cyclo::omega_pow(h * z * j * j));
            let g = quadratic_gauss_sum(z).unwrap();
            ensure(g == brute, || format!("p={p} z={z}: closed sum differs from brute force"))?;
            ensure(&g * &g.conj() == pc, || format!("p={p} z={z}: G conj(G) != p"))?;
            let u = &g * &sqrt_p_pow(p, -1);
            let fourth: Vec<Cyclo> = (0..4).map(|k| Cyclo::i_pow(p, k)).collect();
            ensure(fourth.contains(&u), || format!("p={p} z={z}: G/sqrt(p) = {u}"))?;
            let sign = Cyclo::from_int(p, legendre(z) as i64);
            ensure(u == &unit1 * &sign, || format!("p={p} z={z}: sign pattern"))?;
        }
        let eps = if p.is_one_mod_four() { Cyclo::one(p) } else { Cyclo::i_pow(p, 1) };
        let want = &eps * &Cyclo::from_int(p, legendre(p.zp(2)) as i64);
        ensure(unit1 == want, || format!("p={p}: G(1)/sqrt(p) = {unit1}"))?;
    }
    Ok("p in {3,5,7,11,13}, every unit z".into())
}

fn scalars() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut zeros = 0;
    for p in [pr(3), pr(5)] {
        for k in 0..100 {
            let spec = RandomSpec { spiders: rng.gen_range(1..=8), inputs: 0, outputs: 0, extra_edges: rng.gen_range(0..4) };
            let mut d = random_diagram(p, spec, &mut rng);
            if rng.gen_bool(0.3) {
                d.add_star(1);
            }
            let v = interp_scalar(&d).unwrap();
            let nf = scalar_normal_form(&v).map_err(|e| format!("p={p} diagram {k}: {e}"))?;
            ensure(nf.value(p) == v, || format!("p={p} diagram {k}: {nf} != {v}"))?;
            ensure(interp_scalar(&nf.to_diagram(p)).unwrap() == v, || format!("p={p} diagram {k}: scalar diagram"))?;
            if v.is_zero() {
                ensure(nf == ScalarNf::Zero, || "zero not in zero form".into())?;
                zeros += 1;
            }
        }
    }
    Ok(format!("200 closed diagrams ({zeros} zero)"))
}

fn discards(p: Prime, n: usize) -> Diagram {
    (0..n).fold(Diagram::identity(p, 0), |acc, _| acc.tensor(&Diagram::discard(p)).unwrap())
}

fn isometries(p: Prime) -> Vec<(&'static str, Diagram)> {
    let r = sqrt_p_pow(p, -1);
    vec![
        ("H", gates::h_gate(p)),
        ("S", gates::s_gate(p)),
        ("E", gates::e_gate(p)),
        ("X", gates::x_gate(p)),
        ("Z(1,2)", Diagram::spider(p, Colour::Z, 1, 1, Phase::of(p, 1, 2))),
        ("X(2,1)", Diagram::spider(p, Colour::X, 1, 1, Phase::of(p, 2, 1))),
        ("Mul(2)", Diagram::multiplier(p, p.zp(2))),
        ("green copy", Diagram::spider(p, Colour::Z, 1, 2, Phase::zero(p))),
        ("red copy", Diagram::spider(p, Colour::X, 1, 2, Phase::zero(p))),
        ("green unit", with_scalar(&Diagram::spider(p, Colour::Z, 0, 1, Phase::zero(p)), &r).unwrap()),
        ("red unit", with_scalar(&Diagram::spider(p, Colour::X, 0, 1, Phase::of(p, 2, 0)), &r).unwrap()),
        ("star", Diagram::star_diagram(p)),
    ]
}

fn cpm() -> Outcome {
    let mut count = 0;
    for p in [pr(3), pr(5)] {
        for (name, g) in isometries(p) {
            let (m, n) = g.arity();
            let lhs = interp_cpm(&g.compose(&discards(p, n)).unwrap()).unwrap();
            let rhs = interp_cpm(&discards(p, m)).unwrap();
            ensure(lhs == rhs, || format!("p={p}: {name} then discard"))?;
            count += 1;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        for _ in 0..20 {
            let spec = RandomSpec {
                spiders: rng.gen_range(1..5),
                inputs: rng.gen_range(0..=1),
                outputs: rng.gen_range(0..=2),
                extra_edges: rng.gen_range(0..3),
            };
            let d = random_diagram(p, spec, &mut rng);
            let m = interp(&d).unwrap();
            ensure(interp(&double(&d).unwrap()).unwrap() == m.kron(&m.conj()), || format!("p={p}: doubling"))?;
            count += 1;
        }
    }
    Ok(format!("{count} exact checks"))
}

fn relations() -> Outcome {
    let mut count = 0;
    for p in [pr(3), pr(5)] {
        let mut gens: Vec<(String, Diagram)> = Vec::new();
        for c in [Colour::Z, Colour::X] {
            for (m, n) in [(0, 1), (1, 0), (1, 1), (1, 2), (2, 1), (2, 2)] {
                for x in p.elements() {
                    for y in p.elements() {
                        gens.push((format!("{c:?}{m}{n}({x},{y})"), Diagram::spider(p, c, m, n, Phase::new(x, y))));
                    }
                }
            }
        }
        for w in p.units() {
            gens.push((format!("H({w})"), Diagram::h_box(p, w)));
            gens.push((format!("Mul({w})"), Diagram::multiplier(p, w)));
        }
        for (name, d) in [("cup", Diagram::cup(p)), ("cap", Diagram::cap(p)), ("swap", Diagram::swap(p))] {
            gens.push((name.into(), d));
        }
        gens.push(("star".into(), Diagram::star_diagram(p)));
        for (name, d) in &gens {
            let r = rel_interp(d).unwrap();
            ensure(r.is_coisotropic() && r.is_lagrangian(), || format!("p={p}: {name} not Lagrangian"))?;
        }
        let r = rel_interp(&Diagram::discard(p)).unwrap();
        ensure(r.is_coisotropic() && !r.is_lagrangian(), || "discard".into())?;

        for rule in catalogue() {
            let mut rng = ChaCha8Rng::seed_from_u64(500 + p.get());
            for t in 0..20 {
                let (d, site) = (rule.instance)(p, &mut rng);
                let before = rel_interp(&d).unwrap();
                let ok = if rule.class == RuleClass::Meta {
                    let (m, n) = d.arity();
                    let hs = |k: usize| {
                        (0..k).fold(Diagram::identity(p, 0), |acc, _| acc.tensor(&Diagram::hadamard(p)).unwrap())
                    };
                    let want = hs(m).compose(&d).unwrap().compose(&hs(n)).unwrap();
                    rel_interp(&colour_change_meta(&d)).unwrap() == rel_interp(&want).unwrap()
                } else {
                    let mut after = d.clone();
                    let f = (rule.apply)(&mut after, &site).map_err(|e| format!("{}: {e}", rule.name))?;
                    if f.is_zero() {
                        before.is_empty()
                    } else {
                        before == rel_interp(&after).unwrap()
                    }
                };
                ensure(ok, || format!("p={p}: {} trial {t} changes the relation", rule.name))?;
                count += 1;
            }
        }
    }
    let p = pr(3);
    let mut rng = ChaCha8Rng::seed_from_u64(41);
    for t in 0..60 {
        let (m, k, n) = (rng.gen_range(0..=2), rng.gen_range(0..=2), rng.gen_range(0..=2));
        let mk = |i: usize, o: usize, rng: &mut ChaCha8Rng| {
            let spec = RandomSpec { spiders: rng.gen_range(1..=4), inputs: i, outputs: o, extra_edges: rng.gen_range(0..3) };
            let mut d = random_diagram(p, spec, rng);
            if rng.gen_bool(0.25) {
                let s = d.spiders()[0];
                let x = d.add_vertex(VertexKind::Discard);
                d.plain(s, x);
            }
            d
        };
        let (d1, d2) = (mk(m, k, &mut rng), mk(k, n, &mut rng));
        let (r1, r2) = (rel_interp(&d1).unwrap(), rel_interp(&d2).unwrap());
        let whole = rel_interp(&d1.compose(&d2).unwrap()).unwrap();
        ensure(rel_compose(&r1, &r2).unwrap() == whole, || format!("functoriality {t}"))?;
        let mut brute: BTreeSet<Vec<Zp>> = BTreeSet::new();
        for a in r1.points() {
            for b in r2.points() {
                if a[2 * m..] == b[..2 * k] {
                    brute.insert(a[..2 * m].iter().chain(&b[2 * k..]).copied().collect());
                }
            }
        }
        let got: BTreeSet<Vec<Zp>> = whole.points().into_iter().collect();
        ensure(got == brute, || format!("point enumeration {t}"))?;
        count += 1;
    }
    Ok(format!("{count} rule/functoriality checks"))
}

fn universality() -> Outcome {
    for p in [3u64, 5, 7] {
        let p = pr(p);
        let m = |d: &Diagram| interp(d).unwrap();
        let (h, s, x, z, e) =
            (m(&gates::h_gate(p)), m(&gates::s_gate(p)), m(&gates::x_gate(p)), m(&gates::z_gate(p)), m(&gates::e_gate(p)));
        let conj = |u: &CycloMatrix, a: &CycloMatrix| u.mat_mul(a).unwrap().mat_mul(&u.dagger()).unwrap();
        ensure(conj(&h, &x) == z, || format!("p={p}: HXH† != Z"))?;
        let omega_xz = x.mat_mul(&z).unwrap().scalar_mul(&Cyclo::omega_pow(p.one()));
        ensure(conj(&s, &x) == omega_xz, || format!("p={p}: SXS† != ωXZ"))?;
        ensure(conj(&s, &z) == z, || format!("p={p}: SZS† != Z"))?;
        // E|a,b⟩ = ω^{ab}|a,b⟩
        let n = p.get() as usize;
        for r in 0..n * n {
            for c in 0..n * n {
                let want = if r == c { Cyclo::omega_pow(p.zp(((r / n) * (r % n)) as i64)) } else { Cyclo::zero(p) };
                ensure(*e.get(r, c) == want, || format!("p={p}: E entry {r},{c}"))?;
            }
        }
    }
    Ok("p in {3,5,7}".into())
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("1 rule soundness", soundness),
        ("2 C1 class count", c1_count),
        ("3 equality decision", equality),
        ("4 graph-state operations", graph_states),
        ("5 Gauss sums", gauss_sums),
        ("6 scalar normal forms", scalars),
        ("7 CPM layer", cpm),
        ("8 relation semantics", relations),
        ("9 Clifford conjugations", universality),
    ];
    let mut failed = 0;
    for (name, f) in criteria {
        let res = catch_unwind(AssertUnwindSafe(f)).unwrap_or_else(|e| {
            let msg = e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match res {
            Ok(detail) => println!("PASS criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL criterion {name}: {why}");
            }
        }
    }
    println!("{} of 9 criteria passed", 9 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
