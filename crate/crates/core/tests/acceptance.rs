//! End-to-end acceptance checks, one line per criterion.

mod common;

use std::panic::{self, AssertUnwindSafe};
use std::time::{Duration, Instant};

use labelspace::bratteli::{af_summand_dim, bratteli_diagram, BratteliDiagram, BratteliLevel, Inclusion};
use labelspace::dynamics::cofinal::{check_cofinal_bounded, check_cofinal_sufficient, revalidate_refutation, validate_cover, ProbePath};
use labelspace::dynamics::condition_l::condition_l_equivalence_test;
use labelspace::dynamics::disagreeable::{class_disagreeable, is_space_disagreeable, verify_family, WordFamily};
use labelspace::dynamics::flags::theorem_flags;
use labelspace::dynamics::repeatable::validate_repeatable;
use labelspace::dynamics::sofic::{sofic_stabilization, SoficVerdict};
use labelspace::dynamics::Bounds;
use labelspace::generalized::{class_of, omega};
use labelspace::graph::trivial_labelling;
use labelspace::language::{is_in_language, smallest_period, words_from, Word};
use labelspace::matrix::commutation_in;
use labelspace::presentations::cayley::{gen_cayley, GroupTable};
use labelspace::presentations::cross::cross_validate;
use labelspace::presentations::dyck::gen_dyck;
use labelspace::presentations::even::{gen_even_e1, gen_even_e2};
use labelspace::presentations::oracles::{oracle_x, Oracle};
use labelspace::presentations::random::{random_essential_digraph, random_essential_graph, rng};
use labelspace::presentations::strip::gen_strip_x;
use labelspace::{DirectedGraph, Hierarchy, LabelledGraph, Status, VertexSet, Window};

use common::{brute_classes, names, paths_into_counts, sym};

type Outcome = Result<String, String>;

macro_rules! ensure {
    ($cond:expr, $($msg:tt)*) => {
        if !$cond {
            return Err(format!($($msg)*));
        }
    };
}

fn within(start: Instant, limit: Duration, what: &str) -> Result<(), String> {
    let took = start.elapsed();
    if took > limit {
        return Err(format!("{what} took {took:.2?}, limit {limit:.0?}"));
    }
    Ok(())
}

fn member_names(win: &Window, level: usize) -> Vec<Vec<String>> {
    omega(win, level).unwrap().member_names(win.graph())
}

fn even_classes() -> Outcome {
    let start = Instant::now();
    let e1 = Window::whole(gen_even_e1());
    for l in 1..=4 {
        ensure!(member_names(&e1, l) == [vec!["u"], vec!["v"]], "E1 level {l}: {:?}", member_names(&e1, l));
    }
    let e2 = Window::whole(gen_even_e2());
    ensure!(member_names(&e2, 1) == [vec!["u", "w"], vec!["v"]], "E2 level 1: {:?}", member_names(&e2, 1));
    for l in 2..=4 {
        ensure!(member_names(&e2, l) == [vec!["u"], vec!["v"], vec!["w"]], "E2 level {l}: {:?}", member_names(&e2, l));
    }
    within(start, Duration::from_secs(1), "class partitions")?;
    Ok(format!("E1 two singletons at 1..4; E2 {{u,w}},{{v}} then three singletons ({:.2?})", start.elapsed()))
}

fn disagreeability() -> Outcome {
    let bounds = Bounds::default();
    let e1 = Window::whole(gen_even_e1());
    let g = e1.graph();
    let space = is_space_disagreeable(&e1, &bounds).unwrap();
    ensure!(space.is_certified(), "E1 verdict {:?}", space.status);
    let thresholds = space.witness.unwrap().thresholds;
    ensure!(thresholds == [("u".to_string(), Some(1)), ("v".to_string(), Some(1))], "E1 thresholds {thresholds:?}");
    let (u, v) = (g.vertex_set(&["u"]).unwrap(), g.vertex_set(&["v"]).unwrap());
    let from_u = WordFamily { prefix: sym(g, &["1"]), pump: sym(g, &["1"]), suffix: sym(g, &["0"]) };
    let from_v = WordFamily { prefix: sym(g, &["0"]), pump: sym(g, &["0", "0"]), suffix: sym(g, &["1"]) };
    for n in 1..=10 {
        for l in 1..n + 2 {
            ensure!(verify_family(g, &u, l, &from_u, [n]), "1 1^{n} 0 fails at level {l}");
        }
        for l in 1..2 * n + 2 {
            ensure!(verify_family(g, &v, l, &from_v, [n]), "0^{} 1 fails at level {l}", 2 * n + 1);
        }
    }

    let e2 = Window::whole(gen_even_e2());
    let g = e2.graph();
    let space = is_space_disagreeable(&e2, &bounds).unwrap();
    ensure!(space.is_refuted(), "E2 verdict {:?}", space.status);
    let refuted = space.witness.unwrap().refuted.unwrap();
    ensure!(refuted.class == "w" && refuted.level == 2, "E2 refuted at {}_{}", refuted.class, refuted.level);
    ensure!(refuted.emitted_sample == [(vec!["0".to_string(); 3], 1)], "E2 sample {:?}", refuted.emitted_sample);
    // Independent recheck: every word w emits up to len_max has period 1.
    let w = g.vertex_set(&["w"]).unwrap();
    for n in 2..=bounds.len_max {
        for (word, _) in words_from(g, &w, n) {
            ensure!(smallest_period(&word.0) == 1, "w emits {}", word.display(g));
        }
    }
    let h = Hierarchy::build(&e2, 4).unwrap();
    let wc = h.class_index(2, g.vertex("w").unwrap()).unwrap();
    ensure!(h.partition(2).classes[wc].members.len() == 1, "[w]_2 is not a singleton");
    for l in 2..=4 {
        let c = h.class_index(l, g.vertex("w").unwrap()).unwrap();
        ensure!(class_disagreeable(&h, l, c, &bounds).is_refuted(), "[w]_{l} not refuted");
    }
    Ok("E1 certified with L_u = L_v = 1, both word families verified; E2 refuted at [w]_2, all emitted words 0^n".into())
}

fn cofinality() -> Outcome {
    let start = Instant::now();
    let bounds = Bounds::default();
    let e1 = Window::whole(gen_even_e1());
    ensure!(check_cofinal_sufficient(&e1, &bounds).unwrap().is_certified(), "E1 sufficient test");
    let strip = gen_strip_x(8).unwrap();
    ensure!(check_cofinal_sufficient(&strip, &bounds).unwrap().is_certified(), "strip sufficient test");
    let e2 = Window::whole(gen_even_e2());
    ensure!(!check_cofinal_sufficient(&e2, &bounds).unwrap().is_certified(), "E2 sufficient test applied");
    let probe = ProbePath::new("u", &[], &["1", "0", "0"]);
    let r = check_cofinal_bounded(&e2, 2, &bounds, &[probe]).unwrap();
    ensure!(r.is_refuted(), "E2 level 2 verdict {:?}", r.status);
    let refutation = r.witness.unwrap().refutation.unwrap();
    ensure!(refutation.class == "w" && refutation.target == "u", "refutation {refutation:?}");
    ensure!(refutation.prefix.concat().starts_with("100100"), "prefix {:?}", refutation.prefix);
    ensure!(revalidate_refutation(&e2, &refutation, &bounds).unwrap(), "refutation does not revalidate");
    for l in 1..=4 {
        ensure!(!check_cofinal_bounded(&e1, l, &bounds, &[]).unwrap().is_refuted(), "E1 bounded refutes at {l}");
    }
    within(start, Duration::from_secs(10), "cofinality")?;
    Ok(format!("E1 and strip certified exactly; E2 refuted at [w]_2 against (100)^N from u ({:.2?})", start.elapsed()))
}

/// The closing word from a class representative up `level` steps.
fn climb(g: &LabelledGraph, mut v: u32, level: usize) -> Vec<u32> {
    let mut word = Vec::new();
    for _ in 0..level {
        let e = g.out_edges(v).find(|e| g.symbol_name(e.label).starts_with('b')).expect("every node has a parent");
        word.push(e.label);
        v = e.dst;
    }
    word
}

fn opening_words(g: &LabelledGraph, n: usize, level: usize) -> Vec<Vec<u32>> {
    let mut out = vec![Vec::new()];
    for _ in 0..level {
        out = out
            .into_iter()
            .flat_map(|w: Vec<u32>| {
                (1..=n).map(move |i| {
                    let mut w = w.clone();
                    w.push(g.symbol(&format!("a{i}")).unwrap());
                    w
                })
            })
            .collect();
    }
    out
}

fn dyck() -> Outcome {
    let bounds = Bounds::default();
    let mut details = Vec::new();
    for n in 1..=3usize {
        let start = Instant::now();
        let win = gen_dyck(n, 5).unwrap();
        let g = win.graph();
        let h = Hierarchy::build(&win, 5).unwrap();
        for l in 1..=4 {
            ensure!(h.partition(l).len() == n.pow(l as u32), "N={n}: |classes at {l}| = {}", h.partition(l).len());
        }
        for l in 1..=3 {
            ensure!(commutation_in(&h, l).unwrap().is_certified(), "N={n}: commutation fails at {l}");
        }
        let flags = theorem_flags(&win, &bounds, &[]).unwrap();
        ensure!(
            flags.simple.status == Status::Certified && flags.purely_infinite.status == Status::Certified,
            "N={n}: flags {:?} / {:?} (disagreeable {:?}, cofinal {:?}, repeatable {:?})",
            flags.simple.status,
            flags.purely_infinite.status,
            flags.disagreeable.status,
            flags.cofinal.status,
            flags.repeatable.status
        );
        let a1 = g.symbol("a1").unwrap();
        let b1 = g.symbol("b1").unwrap();
        let family = WordFamily { prefix: Vec::new(), pump: vec![a1], suffix: vec![b1] };
        for l in 1..=4 {
            for c in &h.partition(l).classes {
                // Class members anywhere in the window, so long words still fit.
                let sources: VertexSet = (0..g.vertex_count() as u32).filter(|&v| win.exact_in(v, l) && h.raw_id(l, v) == c.raw()).collect();
                ensure!(verify_family(g, &sources, l, &family, l..=l + 2), "N={n}: a1^k b1 fails for [{}]_{l}", c.name);
                ensure!(validate_repeatable(&h, c.representative(), &[a1, b1], 1..=4), "N={n}: a1 b1 not repeatable at {}", c.name);
            }
        }
        for l in 1..=3 {
            for (ci, c) in h.partition(l).classes.iter().enumerate() {
                let up = climb(g, c.representative(), l);
                let words: Vec<Word> = opening_words(g, n, l).into_iter().map(|down| Word([up.clone(), down].concat())).collect();
                ensure!(validate_cover(&h, l, ci, &words), "N={n}: closing-then-opening words do not cover from [{}]_{l}", c.name);
            }
        }
        if n == 3 {
            within(start, Duration::from_secs(60), "Dyck N=3")?;
        }
        details.push(format!("N={n} {:.1?}", start.elapsed()));
    }
    Ok(format!("N^l classes, commutation, both flag sets and all three witness kinds verified ({})", details.join(", ")))
}

fn sofic() -> Outcome {
    let mut out = Vec::new();
    for (name, win) in [("E1", Window::whole(gen_even_e1())), ("E2", Window::whole(gen_even_e2()))] {
        let r = sofic_stabilization(&win, 4).unwrap();
        ensure!(matches!(r.verdict, SoficVerdict::Stabilized { level } if level <= 2), "{name}: {:?}", r.verdict);
        out.push(format!("{name} {:?}", r.sizes));
    }
    for (name, win) in [("dyck(2)", gen_dyck(2, 4).unwrap()), ("strip", gen_strip_x(8).unwrap())] {
        let r = sofic_stabilization(&win, 4).unwrap();
        ensure!(r.verdict == SoficVerdict::Growing { strictly: true }, "{name}: {:?} {:?}", r.sizes, r.verdict);
        out.push(format!("{name} {:?}", r.sizes));
    }
    Ok(out.join("; "))
}

fn pumping() -> Outcome {
    let win = gen_strip_x(16).unwrap();
    let g = win.graph();
    let cross = cross_validate(&win, Oracle::X, 12).unwrap();
    ensure!(cross.is_certified(), "cross validation: {:?}", cross.witness.and_then(|w| w.discrepancy));
    let mut lengths = Vec::new();
    for n in 1..=3 {
        for m in 1..=2 {
            let mut word = vec!["a".to_string()];
            word.extend(std::iter::repeat_n("b".to_string(), 2 * n));
            word.extend(std::iter::repeat_n("c".to_string(), 2 * n + m));
            word.push("a".into());
            ensure!(!oracle_x(&word).unwrap(), "oracle accepts {}", word.concat());
            let refs: Vec<&str> = word.iter().map(String::as_str).collect();
            let symbols = sym(g, &refs);
            ensure!(!is_in_language(g, &symbols), "presentation generates {}", word.concat());
            lengths.push(word.len());
        }
    }
    Ok(format!("oracle and presentation reject all six words (lengths {lengths:?}); languages agree through length 12"))
}

fn oracle_equivalence() -> Outcome {
    let cases = [
        ("E1/even", Window::whole(gen_even_e1()), Oracle::Even),
        ("E2/even", Window::whole(gen_even_e2()), Oracle::Even),
        ("dyck(2)/dyck", gen_dyck(2, 3).unwrap(), Oracle::Dyck(2)),
        ("strip/x", gen_strip_x(8).unwrap(), Oracle::X),
    ];
    let mut out = Vec::new();
    for (name, win, oracle) in cases {
        let r = cross_validate(&win, oracle, 6).unwrap();
        let report = r.witness.clone().unwrap();
        ensure!(r.is_certified(), "{name}: {:?}", report.discrepancy);
        out.push(format!("{name} {:?}", report.counts));
    }
    Ok(out.join("; "))
}

fn classes_match(win: &Window, ell: usize) -> Result<(), String> {
    let brute = brute_classes(win, ell);
    let h = Hierarchy::build(win, ell).map_err(|e| e.to_string())?;
    let refined: Vec<Vec<u32>> = h.partition(ell).classes.iter().map(|c| c.members.as_slice().to_vec()).collect();
    if refined != brute {
        return Err(format!("refinement {:?} vs brute force {:?}", refined, brute));
    }
    for class in &brute {
        for &v in class {
            let formula = class_of(win, v, ell).map_err(|e| e.to_string())?;
            if formula.as_slice() != class.as_slice() {
                return Err(format!(
                    "class of {} at {ell}: formula {:?}, brute force {:?}",
                    win.graph().vertex_name(v),
                    names(win.graph(), formula.as_slice()),
                    names(win.graph(), class)
                ));
            }
        }
    }
    Ok(())
}

fn formula_vs_definition() -> Outcome {
    let builtins = [
        ("E1", Window::whole(gen_even_e1())),
        ("E2", Window::whole(gen_even_e2())),
        ("dyck(2)", gen_dyck(2, 3).unwrap()),
        ("strip", gen_strip_x(8).unwrap()),
        ("cayley", Window::whole(gen_cayley(&GroupTable::cyclic(3), &["1", "2"]).unwrap())),
    ];
    for (name, win) in &builtins {
        for ell in 1..=3 {
            classes_match(win, ell).map_err(|e| format!("{name}: {e}"))?;
        }
    }
    let mut r = rng(8);
    for i in 0..100 {
        let g = random_essential_graph(&mut r, 8, 3);
        let win = Window::whole(g);
        for ell in 1..=3 {
            classes_match(&win, ell).map_err(|e| format!("random graph {i}: {e}\n{}", win.graph().to_json()))?;
        }
    }
    Ok("5 built-ins and 100 random graphs, levels 1..3, zero discrepancies".into())
}

fn condition_l() -> Outcome {
    let mut r = rng(9);
    let (mut with_l, mut without_l) = (0, 0);
    for i in 0..100 {
        let g = random_essential_digraph(&mut r, 6);
        let v = condition_l_equivalence_test(&g, &Bounds::default()).unwrap();
        let report = v.witness.clone().unwrap();
        ensure!(v.is_certified(), "graph {i} {:?}: condition (L) {:?}, disagreeable {:?}", g, report.condition_l, report.disagreeable);
        match report.condition_l {
            Status::Certified => with_l += 1,
            _ => without_l += 1,
        }
    }
    Ok(format!("100 random graphs agree ({with_l} satisfy condition (L), {without_l} do not)"))
}

fn expected_e1_bratteli() -> BratteliDiagram {
    let s = |a: &str, b: &str, m: usize| (a.to_string(), b.to_string(), m);
    let classes = vec!["u".to_string(), "v".to_string()];
    BratteliDiagram {
        k_max: 2,
        ell_max: 2,
        levels: vec![
            BratteliLevel { k: 1, level: 1, classes: classes.clone(), sizes: vec![2, 1] },
            BratteliLevel { k: 1, level: 2, classes: classes.clone(), sizes: vec![2, 1] },
            BratteliLevel { k: 2, level: 2, classes, sizes: vec![3, 2] },
        ],
        horizontal: vec![Inclusion { from: (1, 1), to: (1, 2), edges: vec![s("u", "u", 1), s("v", "v", 1)] }],
        diagonal: vec![Inclusion { from: (1, 1), to: (2, 2), edges: vec![s("u", "u", 1), s("u", "v", 1), s("v", "u", 1)] }],
    }
}

fn af_core() -> Outcome {
    let mut graphs = vec![
        gen_even_e1().underlying(),
        DirectedGraph::new(&["x"], &[("x", "x")]),
        DirectedGraph::new(&["x", "y"], &[("x", "x"), ("x", "y"), ("y", "x"), ("y", "y")]),
    ];
    let mut r = rng(10);
    graphs.extend((0..30).map(|_| random_essential_digraph(&mut r, 6)));
    for (i, dg) in graphs.iter().enumerate() {
        let win = Window::whole(trivial_labelling(dg).unwrap());
        let g = win.graph();
        let h = Hierarchy::build(&win, 3).unwrap();
        for k in 1..=3 {
            let counts = paths_into_counts(g, k);
            for v in 0..g.vertex_count() as u32 {
                let c = h.class_index(3, v).unwrap();
                ensure!(h.partition(3).classes[c].members == VertexSet::singleton(v), "graph {i}: class of {v} not a singleton");
                let dim = af_summand_dim(&win, k, c, 3).unwrap();
                ensure!(dim as u64 == counts[v as usize], "graph {i}, k={k}, vertex {v}: {dim} vs {}", counts[v as usize]);
            }
        }
    }
    let d = bratteli_diagram(&Window::whole(gen_even_e1()), 2, 2).unwrap();
    ensure!(d == expected_e1_bratteli(), "E1 Bratteli diagram {d:?}");
    Ok(format!("{} trivially labelled graphs match path counts for k <= 3; E1 diagram matches snapshot", graphs.len()))
}

fn main() {
    type Criterion = (&'static str, fn() -> Outcome);
    let criteria: [Criterion; 10] = [
        ("even-shift class partitions", even_classes),
        ("disagreeability", disagreeability),
        ("cofinality", cofinality),
        ("Dyck shifts", dyck),
        ("sofic stabilization", sofic),
        ("non-sofic pumping", pumping),
        ("oracle equivalence", oracle_equivalence),
        ("class formula vs definition", formula_vs_definition),
        ("condition (L) equivalence", condition_l),
        ("AF core regression", af_core),
    ];
    panic::set_hook(Box::new(|_| {}));
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = panic::catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let took = start.elapsed();
        match outcome {
            Ok(detail) => println!("criterion {:>2} PASS  {name} [{took:.2?}]: {detail}", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} FAIL  {name} [{took:.2?}]: {why}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
