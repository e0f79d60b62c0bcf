use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use zxp::graphstate::{to_bare_diagram, to_diagram, WeightedGraph};
use zxp::interp::{interp, interp_raw};
use zxp::normalize::*;
use zxp::rules::{random_diagram, random_rewrites, RandomSpec, RewriteState};
use zxp::{Cyclo, Diagram, Prime, VertexKind};

fn primes() -> [Prime; 2] {
    [Prime::new(3).unwrap(), Prime::new(5).unwrap()]
}

fn small_diagram(p: Prime, rng: &mut ChaCha8Rng) -> Diagram {
    let wires = rng.gen_range(0..=3);
    let inputs = rng.gen_range(0..=wires);
    let spec = RandomSpec {
        spiders: rng.gen_range(1..=12 - wires),
        inputs,
        outputs: wires - inputs,
        extra_edges: rng.gen_range(0..4),
    };
    random_diagram(p, spec, rng)
}

fn state_value(st: &RewriteState) -> zxp::CycloMatrix {
    interp(&st.graph).unwrap().scalar_mul(&st.scalar)
}

#[test]
fn pipeline_stages_preserve_the_interpretation() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for p in primes() {
        for _ in 0..60 {
            let d = small_diagram(p, &mut rng);
            let want = interp(&d.choi()).unwrap();
            let gl = to_graph_like(&d.choi()).unwrap();
            assert!(is_graph_like(&gl.graph));
            assert_eq!(state_value(&gl), want);
            let el = eliminate_internal(&gl).unwrap();
            assert_eq!(state_value(&el), want);
            for v in el.graph.spiders() {
                if let VertexKind::Z(_) = el.graph.kind(v) {
                    let touches = el.graph.neighbours(v).iter().any(|&u| {
                        el.graph.kind(u).is_boundary()
                            || (matches!(el.graph.kind(u), VertexKind::X(_))
                                && el.graph.neighbours(u).iter().any(|&w| el.graph.kind(w).is_boundary()))
                    });
                    assert!(touches || want.is_zero(), "internal vertex {v} left\n{}", el.graph.to_json());
                }
            }
            let r = to_rgs_lc(&d).unwrap();
            r.check_reduced().unwrap();
            let got = if r.zero {
                interp(&r.to_diagram()).unwrap()
            } else {
                interp(&r.to_diagram()).unwrap().scalar_mul(&r.scalar)
            };
            assert_eq!(got, want);
            let g = r.to_gs_lc();
            if !g.zero {
                assert_eq!(interp(&g.to_diagram()).unwrap().scalar_mul(&g.scalar), want);
            }
        }
    }
}

#[test]
fn graph_state_is_a_fixed_point() {
    let p = Prime::new(3).unwrap();
    let g = WeightedGraph::from_matrix(p, &[vec![0, 2, 1], vec![2, 0, 0], vec![1, 0, 0]]).unwrap();
    let d = to_bare_diagram(&g);
    let st = to_graph_like(&d).unwrap();
    assert_eq!(st.graph, d);
    assert!(st.trace.is_empty());
    let gs = to_gs_lc(&to_diagram(&g)).unwrap();
    assert_eq!(gs.graph, g);
    assert!(gs.vertex_ops.iter().all(|op| *op == C1NormalForm::identity(p)));
}

#[test]
fn graph_like_examples() {
    let p = Prime::new(5).unwrap();
    // red state becomes green
    let mut d = Diagram::empty(p);
    let x = d.add_x(1, 2);
    let o = d.add_output();
    d.plain(x, o);
    let st = to_graph_like(&d).unwrap();
    assert!(st.graph.vertices.values().all(|k| !matches!(k, VertexKind::X(_))));
    assert_eq!(state_value(&st), interp(&d).unwrap());
    // parallel Hadamards merge
    let mut d = Diagram::empty(p);
    let a = d.add_z(0, 0);
    let b = d.add_z(0, 0);
    d.h(a, b, 1);
    d.h(a, b, 1);
    for v in [a, b] {
        let o = d.add_output();
        d.plain(v, o);
    }
    let st = to_graph_like(&d).unwrap();
    let hs: Vec<_> = st.graph.edges.iter().filter(|e| matches!(e.kind, zxp::EdgeKind::H(_))).collect();
    assert_eq!(hs.len(), 1);
    assert_eq!(hs[0].kind, zxp::EdgeKind::H(p.zp(2)));
}

#[test]
fn eliminate_internal_examples() {
    let p = Prime::new(3).unwrap();
    // no internal vertices: unchanged
    let g = WeightedGraph::from_matrix(p, &[vec![0, 1], vec![1, 0]]).unwrap();
    let st = RewriteState::new(to_bare_diagram(&g));
    let el = eliminate_internal(&st).unwrap();
    assert_eq!(el.graph, st.graph);
    // isolated internal vertex goes into the scalar
    let mut d = to_bare_diagram(&g);
    d.add_z(0, 1);
    let el = eliminate_internal(&RewriteState::new(d.clone())).unwrap();
    assert_eq!(el.graph.spiders().len(), 2);
    assert_eq!(state_value(&el), interp(&d).unwrap());
    // internal vertex on a path to an output vertex
    let mut d = Diagram::empty(p);
    let u = d.add_z(1, 1);
    let v = d.add_z(0, 2);
    d.h(u, v, 2);
    let o = d.add_output();
    d.plain(v, o);
    let el = eliminate_internal(&RewriteState::new(d.clone())).unwrap();
    assert_eq!(state_value(&el), interp(&d).unwrap());
    assert_eq!(el.graph.spiders().len(), 1);
}

#[test]
fn hadamard_on_a_graph_state_output() {
    let p = Prime::new(3).unwrap();
    let g = WeightedGraph::from_matrix(p, &[vec![0, 1, 0], vec![1, 0, 2], vec![0, 2, 0]]).unwrap();
    let h = Diagram::h_box(p, p.one());
    let d = zxp::graphstate::on_output(&to_diagram(&g), 1, &h).unwrap();
    let r = to_gs_lc(&d).unwrap();
    assert_eq!(interp(&r.to_diagram()).unwrap().scalar_mul(&r.scalar), interp(&d).unwrap());
}

#[test]
fn adjacent_marked_pair_is_reduced() {
    // two vertices whose operators both contain red parts, joined by an edge
    let p = Prime::new(3).unwrap();
    let mut d = Diagram::empty(p);
    let a = d.add_z(1, 1);
    let b = d.add_z(0, 1);
    d.h(a, b, 1);
    for v in [a, b] {
        let x = d.add_x(0, 1);
        let o = d.add_output();
        d.plain(v, x);
        d.plain(x, o);
    }
    let r = to_rgs_lc(&d).unwrap();
    r.check_reduced().unwrap();
    assert_eq!(interp(&r.to_diagram()).unwrap().scalar_mul(&r.scalar), interp(&d).unwrap());
}

#[test]
fn simplify_pair_resolves_constructed_offences() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let p = Prime::new(3).unwrap();
    let mut exchanged = 0;
    for _ in 0..80 {
        let d = small_diagram(p, &mut rng);
        let a = to_rgs_lc(&d).unwrap();
        if a.zero {
            continue;
        }
        let n = a.outputs();
        let pair = (0..n).flat_map(|q| (0..n).map(move |f| (q, f))).find(|&(q, f)| {
            a.marked[q] && !a.marked[f] && !a.graph.get(q, f).is_zero()
        });
        let Some((q, f)) = pair else { continue };
        let mut b = a.clone();
        b.exchange(q, f).unwrap();
        exchanged += 1;
        let want = interp(&d.choi()).unwrap();
        assert_eq!(interp(&b.to_diagram()).unwrap().scalar_mul(&b.scalar), want);
        match simplify_pair(&a, &b).unwrap() {
            PairOutcome::Simplified(x, y) => {
                assert!(x.same_form(&y));
                assert_eq!(interp(&x.to_diagram()).unwrap().scalar_mul(&x.scalar), want);
                assert_eq!(interp(&y.to_diagram()).unwrap().scalar_mul(&y.scalar), want);
            }
            PairOutcome::Irreconcilable { .. } => panic!("equal states must reconcile"),
        }
        // already simplified: unchanged
        match simplify_pair(&a, &a).unwrap() {
            PairOutcome::Simplified(x, _) => assert!(x.same_form(&a)),
            _ => panic!(),
        }
    }
    assert!(exchanged > 10, "{exchanged}");
}

#[test]
fn decide_equal_worked_examples() {
    let p = Prime::new(3).unwrap();
    let ket = |x: i64| {
        let mut d = Diagram::empty(p);
        let s = d.add_x(2 * x, 0);
        let o = d.add_output();
        d.plain(s, o);
        d
    };
    assert!(!decide_equal(&ket(0), &ket(1)).unwrap().equal);
    assert!(decide_equal(&ket(1), &ket(1)).unwrap().equal);
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let d = small_diagram(p, &mut rng);
    let mut starred = d.clone();
    starred.add_star(1);
    let dec = decide_equal(&d, &starred).unwrap();
    assert_eq!(dec.equal, interp(&d).unwrap().is_zero());
    let other = Diagram::identity(p, 2);
    assert!(decide_equal(&ket(0), &other).is_err());
}

#[test]
fn decide_equal_agrees_with_the_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for p in primes() {
        let mut equal = 0;
        for k in 0..60 {
            let a = small_diagram(p, &mut rng);
            let b = if k % 2 == 0 {
                let st = random_rewrites(&a, 20, 16, &mut rng);
                with_scalar(&st.graph, &st.scalar).unwrap()
            } else {
                let (m, n) = a.arity();
                let mut b = small_diagram(p, &mut rng);
                while b.arity() != (m, n) {
                    b = small_diagram(p, &mut rng);
                }
                b
            };
            let ta = interp_raw(&a).unwrap();
            let tb = interp_raw(&b).unwrap();
            let truth = ta.scaled_eq(&Cyclo::one(p), &tb, &Cyclo::one(p));
            if k % 2 == 0 {
                assert!(truth, "rewrites must be sound");
            }
            let dec = decide_equal(&a, &b).unwrap();
            assert_eq!(dec.equal, truth, "{}\n{}", a.to_json(), b.to_json());
            equal += truth as usize;
        }
        assert!(equal >= 30);
    }
}

#[test]
fn zero_form_absorbs() {
    let p = Prime::new(3).unwrap();
    let z = zero_form(p, 1, 1);
    assert!(interp(&zero_form(p, 0, 0)).unwrap().is_zero());
    let h = Diagram::h_box(p, p.one());
    let composed = z.compose(&h).unwrap();
    let r = to_rgs_lc(&composed).unwrap();
    assert!(r.zero);
    assert_eq!(r.to_diagram(), zero_form(p, 0, 2));
    assert!(decide_equal(&composed, &z).unwrap().equal);
}
