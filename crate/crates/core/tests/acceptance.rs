//! End-to-end acceptance checks. Prints one PASS/FAIL line per criterion and
//! exits nonzero if any fails.

mod common;

use std::process::ExitCode;
use std::time::{Duration, Instant};

use heisenberg_homology::config_complex::{build_complex, CoefficientOracle};
use heisenberg_homology::heisenberg::{check_relations, linearized_rep, GroupRingElement, HeisenbergElement, SurfaceParams};
use heisenberg_homology::homology::{bm_homology, concentration_report, Specialization};
use heisenberg_homology::mcg_action::{
    aut_from_twist, decompose_cycle, render_matrix, twist_matrix, verify_identities, CurveWord, CycleKind, Twist,
};
use heisenberg_homology::ribbon_graph::{standard_model, RelativeSubgraph, RibbonGraph};
use heisenberg_homology::Result;

type Outcome = Result<std::result::Result<String, String>>;
type Criterion = (&'static str, Option<Duration>, fn() -> Outcome);

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn timed(limit: Option<Duration>, f: impl FnOnce() -> Outcome) -> std::result::Result<String, String> {
    let start = Instant::now();
    let out = match f() {
        Ok(r) => r,
        Err(e) => Err(format!("error: {e}")),
    };
    let dt = start.elapsed();
    match (out, limit) {
        (Ok(msg), Some(l)) if dt > l => Err(format!("{msg}; took {dt:.2?}, limit {l:?}")),
        (Ok(msg), _) => Ok(format!("{msg} [{dt:.2?}]")),
        (Err(msg), _) => Err(msg),
    }
}

fn rank_formula() -> Outcome {
    let mut checked = 0;
    for g in 0..=2 {
        for m in 1..=3 {
            let (graph, rel) = standard_model(g, m)?;
            for n in 1..=4 {
                let c = build_complex(&graph, Some(&rel), n, CoefficientOracle::StandardWedge)?;
                let expected = binomial(2 * g + m + n - 2, n);
                let rank = match concentration_report(&c) {
                    Ok(r) => r,
                    Err(_) if expected == 0 && c.cells.iter().all(|x| x.is_empty()) => 0,
                    Err(e) => return Ok(Err(format!("(g,m,n)=({g},{m},{n}): {e}"))),
                };
                let h = bm_homology(&c, &Specialization::TrivialInt)?;
                let mut ranks = vec![0; n + 1];
                ranks[n] = expected;
                if rank != expected || h.ranks() != ranks {
                    return Ok(Err(format!("(g,m,n)=({g},{m},{n}): rank {rank}, homology {:?}, expected {expected}", h.ranks())));
                }
                checked += 1;
            }
        }
    }
    Ok(Ok(format!("{checked} relative complexes concentrated in degree n with rank C(2g+m+n-2,n)")))
}

fn published_matrices() -> Outcome {
    let expected_a = "1 & 1 & -u + 1\n0 & u^2·a1^2 & 0\n0 & a1 & a1";
    let expected_b = "1 & 0 & 0\n-u^7·a1^2·b1^-2 & 1 & -u^4·a1·b1^-1 + u^3·a1·b1^-1\n-u^2·a1·b1^-1 & 0 & 1";
    let (ma, mb) = (render_matrix(&twist_matrix(Twist::Ta)?), render_matrix(&twist_matrix(Twist::Tb)?));
    Ok(if ma == expected_a && mb == expected_b {
        Ok("M_a and M_b equal the published matrices entry for entry".into())
    } else {
        Err(format!("M_a =\n{ma}\nM_b =\n{mb}"))
    })
}

fn identity(prefix: &str) -> Outcome {
    let checks = verify_identities()?;
    let c = checks.iter().filter(|c| c.name.starts_with(prefix)).collect::<Vec<_>>();
    Ok(if !c.is_empty() && c.iter().all(|c| c.passed) {
        Ok(c.iter().map(|c| c.name.clone()).collect::<Vec<_>>().join("; "))
    } else {
        Err(format!("failed: {:?}", c.iter().filter(|c| !c.passed).map(|c| &c.name).collect::<Vec<_>>()))
    })
}

fn phi_relations() -> Outcome {
    let mut instances = 0;
    for g in 0..=2 {
        for m in 1..=3 {
            for n in 2..=3 {
                let rep = check_relations(SurfaceParams::new(g, m)?, n)?;
                if !rep.passed() {
                    let bad: Vec<_> = rep.families.iter().filter(|f| !f.passed()).map(|f| f.name).collect();
                    return Ok(Err(format!("(g,m,n)=({g},{m},{n}) failing families {bad:?}")));
                }
                instances += rep.families.iter().map(|f| f.instances).sum::<usize>();
            }
        }
    }
    Ok(Ok(format!("{instances} relation instances respected by φ")))
}

fn boundary_squares() -> Outcome {
    let mut count = 0;
    for (g, m) in [(1, 1), (1, 2)] {
        let (graph, _) = standard_model(g, m)?;
        for n in 2..=3 {
            let c = build_complex(&graph, None, n, CoefficientOracle::StandardWedge)?;
            if !c.is_chain_complex()? {
                return Ok(Err(format!("standard_model({g},{m}), n={n}: d∘d ≠ 0")));
            }
            count += 1;
        }
    }
    let mut rng = common::rng(6);
    for i in 0..8 {
        let graph = common::random_graph(&mut rng, 6);
        for n in 2..=3 {
            let c = build_complex(&graph, None, n, CoefficientOracle::Trivial)?;
            if !c.is_chain_complex()? {
                return Ok(Err(format!("random graph {i}, n={n}: d∘d ≠ 0\n{}", graph.to_text(&RelativeSubgraph::empty()))));
            }
            count += 1;
        }
    }
    Ok(Ok(format!("{count} complexes (4 with Heisenberg coefficients, 16 on random graphs) satisfy d∘d = 0")))
}

fn decompositions() -> Outcome {
    let p = SurfaceParams::new(1, 1)?;
    let e = |s: &str| GroupRingElement::parse(p, s);
    let ba = CurveWord::parse("βAα")?;
    let w = decompose_cycle(&CycleKind::W(ba.clone()))?;
    let v = decompose_cycle(&CycleKind::V(CurveWord::alpha(), ba))?;
    let ok_w = w == [e("1")?, e("u^2 a1^2")?, e("a1")?];
    let ok_v = v == [e("-u + 1")?, GroupRingElement::zero(p), e("a1")?];
    Ok(if ok_w && ok_v {
        Ok("w(βAα) = w(α) + a·v(α,β) + u²a²·w(β); v(α,βAα) = (−u+1)·w(α) + a·v(α,β)".into())
    } else {
        Err(format!("w(βAα) -> {:?}; v(α,βAα) -> {:?}", w.map(|x| x.to_string()), v.map(|x| x.to_string())))
    })
}

fn subdivide_all(graph: &RibbonGraph) -> RibbonGraph {
    let mut g = graph.clone();
    let mut rel = RelativeSubgraph::empty();
    for e in 0..graph.edge_count() {
        (g, rel) = g.subdivide(e, &rel);
    }
    g
}

fn subdivision() -> Outcome {
    let mut rng = common::rng(8);
    let mut graphs: Vec<RibbonGraph> = (0..6).map(|_| common::random_graph(&mut rng, 5)).collect();
    graphs.push(standard_model(1, 1)?.0);
    for (i, graph) in graphs.iter().enumerate() {
        let before = bm_homology(&build_complex(graph, None, 2, CoefficientOracle::Trivial)?, &Specialization::TrivialInt)?;
        let fine = subdivide_all(graph);
        let after = bm_homology(&build_complex(&fine, None, 2, CoefficientOracle::Trivial)?, &Specialization::TrivialInt)?;
        if before.degrees != after.degrees {
            return Ok(Err(format!("graph {i}: {:?} vs {:?} after subdivision", before.ranks(), after.ranks())));
        }
    }
    Ok(Ok(format!("{} graphs: integral homology unchanged by subdividing every edge", graphs.len())))
}

fn linearized() -> Outcome {
    let mut rng = common::rng(9);
    let mut pairs = 0;
    for (g, m) in [(1, 1), (1, 2)] {
        let p = SurfaceParams::new(g, m)?;
        for _ in 0..120 {
            let (x, y) = (common::random_element(&mut rng, p, 6), common::random_element(&mut rng, p, 6));
            if linearized_rep(&x.mul(&y)?) != linearized_rep(&x).mul(&linearized_rep(&y)) {
                return Ok(Err(format!("ρ_L not multiplicative on {x}, {y}")));
            }
            pairs += 1;
        }
    }
    let p = SurfaceParams::new(1, 1)?;
    let mut gens: Vec<HeisenbergElement> = (0..p.rank()).map(|i| HeisenbergElement::generator(p, i)).collect();
    gens.push(HeisenbergElement::u(p));
    for t in [Twist::Ta, Twist::Tb] {
        let tau = aut_from_twist(t);
        let lin = tau.linear_matrix();
        for h in &gens {
            if lin.mul(&linearized_rep(h)) != linearized_rep(&tau.apply(h)?).mul(&lin) {
                return Ok(Err(format!("intertwiner fails for {t} on {h}")));
            }
        }
    }
    Ok(Ok(format!("ρ_L multiplicative on {pairs} pairs; τ×Id intertwines for (T_a)_H, (T_b)_H on all generators")))
}

fn degenerate() -> Outcome {
    let (edge, _) = RibbonGraph::parse("vertex v\nvertex w\nedge e v w\n")?;
    let c = build_complex(&edge, None, 2, CoefficientOracle::Trivial)?;
    for s in ["trivial", "linearized", "scalar:u=-1"] {
        let sp = Specialization::parse(c.params, s)?;
        if !bm_homology(&c, &sp)?.is_zero() {
            return Ok(Err(format!("closed edge, n=2, {s}: homology not zero")));
        }
    }
    let (disk, rel) = standard_model(0, 1)?;
    let c = build_complex(&disk, Some(&rel), 2, CoefficientOracle::StandardWedge)?;
    if c.cells.iter().any(|x| !x.is_empty()) {
        return Ok(Err(format!("disk relative complex has cells {:?}", c.cell_counts())));
    }
    Ok(Ok("closed edge has zero homology; relative disk complex is empty".into()))
}

fn main() -> ExitCode {
    let s = Duration::from_secs;
    let criteria: Vec<Criterion> = vec![
        ("rank formula", Some(s(10)), rank_formula),
        ("twist matrices", None, published_matrices),
        ("braid relation", Some(s(1)), || identity("braid relation")),
        ("boundary twist", Some(s(5)), || identity("boundary twist")),
        ("phi well-defined", Some(s(5)), phi_relations),
        ("d∘d = 0 over Z[H]", Some(s(60)), boundary_squares),
        ("decomposition calibration", None, decompositions),
        ("subdivision invariance", Some(s(30)), subdivision),
        ("linearized representation", None, linearized),
        ("degenerate cases", None, degenerate),
    ];
    let mut failed = 0;
    for (i, (name, limit, f)) in criteria.into_iter().enumerate() {
        match timed(limit, f) {
            Ok(msg) => println!("PASS {:>2} {name}: {msg}", i + 1),
            Err(msg) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {msg}", i + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 10 - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
