use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use heisenberg_homology::config_complex::{build_complex, BMComplex, CoefficientOracle, StandardWedge};
use heisenberg_homology::heisenberg::{check_relations, phi_eval, BraidWord, SurfaceParams};
use heisenberg_homology::homology::{bm_homology, Specialization};
use heisenberg_homology::mcg_action::{render_matrix, twist_matrix, verify_identities, RingMatrix, Twist, BASIS};
use heisenberg_homology::ribbon_graph::{
    h1_basis, standard_model, surface_invariants, trace_faces, validate_relative, RelativeSubgraph, RibbonGraph,
};
use heisenberg_homology::Error;

#[derive(Parser)]
#[command(name = "hhom", version, about = "Heisenberg homology of configuration spaces of ribbon graphs")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleChoice {
    /// Heisenberg coefficients when the graph is a standard model, trivial otherwise.
    Auto,
    Trivial,
    Standard,
}

#[derive(Args)]
struct GraphSource {
    /// Graph file in the interchange format.
    graph: Option<PathBuf>,
    /// Use the built-in standard model of genus g with m boundary components.
    #[arg(long, value_name = "G,M", conflicts_with = "graph")]
    model: Option<String>,
}

#[derive(Args)]
struct ComplexArgs {
    #[command(flatten)]
    source: GraphSource,
    /// Number of configuration points.
    #[arg(long, default_value_t = 2)]
    n: usize,
    /// Work relative to the distinguished subgraph.
    #[arg(long)]
    relative: bool,
    #[arg(long, value_enum, default_value_t = OracleChoice::Auto)]
    oracle: OracleChoice,
}

#[derive(Subcommand)]
enum Command {
    /// Genus, boundary components, faces and the intersection form.
    Invariants {
        #[command(flatten)]
        source: GraphSource,
    },
    /// Cells of the configuration complex by degree.
    Cells {
        #[command(flatten)]
        args: ComplexArgs,
    },
    /// Nonzero entries of the boundary maps.
    Boundary {
        #[command(flatten)]
        args: ComplexArgs,
        /// Only print the map out of this degree.
        #[arg(long)]
        degree: Option<usize>,
    },
    /// Borel–Moore homology under a coefficient specialisation.
    Homology {
        #[command(flatten)]
        args: ComplexArgs,
        /// trivial | linearized | scalar:u=±1,a1=…,b1=…
        #[arg(long, default_value = "trivial")]
        coeff: String,
    },
    /// Evaluate φ on a braid word such as "s1 a1^-1 b1".
    Phi {
        #[arg(long)]
        word: String,
        #[arg(long, value_name = "G,M", default_value = "1,1")]
        model: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
    /// Matrices of the twists T_a, T_b on the relative homology of the
    /// one-holed torus with two points.
    TwistMatrices,
    /// Check the braid-group relations under φ and the twist identities.
    Verify {
        /// Only check the twist-matrix identities.
        #[arg(long)]
        twists: bool,
        #[arg(long, value_name = "G,M", default_value = "1,1")]
        model: String,
        #[arg(long, default_value_t = 2)]
        n: usize,
    },
}

/// Input or usage problems (exit code 2); failed checks are reported
/// through `Report::ok` instead (exit code 1).
enum Failure {
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

struct Report {
    text: String,
    json: Value,
    ok: bool,
}

fn parse_model(s: &str) -> Result<(usize, usize), Failure> {
    let bad = || Failure::Usage(format!("--model expects G,M (got `{s}`)"));
    let (g, m) = s.split_once(',').ok_or_else(bad)?;
    Ok((g.trim().parse().map_err(|_| bad())?, m.trim().parse().map_err(|_| bad())?))
}

fn load(source: &GraphSource) -> Result<(RibbonGraph, RelativeSubgraph), Failure> {
    match (&source.graph, &source.model) {
        (_, Some(m)) => {
            let (g, m) = parse_model(m)?;
            Ok(standard_model(g, m)?)
        }
        (Some(path), None) => {
            let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            let (graph, rel) = RibbonGraph::parse(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
            if !rel.is_empty() {
                validate_relative(&graph, &rel)?;
            }
            Ok((graph, rel))
        }
        (None, None) => Err(Failure::Usage("a graph file or --model G,M is required".into())),
    }
}

fn complex(args: &ComplexArgs) -> Result<(RibbonGraph, BMComplex), Failure> {
    let (graph, rel) = load(&args.source)?;
    let rel = args.relative.then_some(&rel);
    let oracle = match args.oracle {
        OracleChoice::Trivial => CoefficientOracle::Trivial,
        OracleChoice::Standard => CoefficientOracle::StandardWedge,
        OracleChoice::Auto => {
            if StandardWedge::for_graph(&graph, rel, args.n).is_ok() {
                CoefficientOracle::StandardWedge
            } else {
                CoefficientOracle::Trivial
            }
        }
    };
    let c = build_complex(&graph, rel, args.n, oracle)?;
    Ok((graph, c))
}

fn oracle_name(o: CoefficientOracle) -> &'static str {
    match o {
        CoefficientOracle::Trivial => "trivial",
        CoefficientOracle::StandardWedge => "standard",
    }
}

fn invariants(source: &GraphSource) -> Result<Report, Failure> {
    let (graph, _) = load(source)?;
    let inv = surface_invariants(&graph)?;
    let faces: Vec<Vec<String>> =
        trace_faces(&graph).iter().map(|f| f.iter().map(|&h| graph.half_edge_name(h)).collect()).collect();
    let basis = h1_basis(&graph)?;
    let mut text = format!(
        "genus {}\nboundary components {}\neuler characteristic {}\n",
        inv.genus, inv.boundary_components, inv.euler_characteristic
    );
    for (i, f) in faces.iter().enumerate() {
        text += &format!("face {i}: {}\n", f.join(" "));
    }
    text += "intersection form on H1:\n";
    for row in &basis.intersection {
        text += &format!("  {}\n", row.iter().map(|v| format!("{v:>2}")).collect::<Vec<_>>().join(" "));
    }
    Ok(Report {
        text,
        json: json!({ "invariants": inv, "faces": faces, "intersection": basis.intersection }),
        ok: true,
    })
}

fn cells(args: &ComplexArgs) -> Result<Report, Failure> {
    let (graph, c) = complex(args)?;
    let mut text = String::new();
    let mut by_degree = Vec::new();
    for (k, cs) in c.cells.iter().enumerate() {
        let names: Vec<String> = cs.iter().map(|cell| cell.describe(&graph)).collect();
        text += &format!("degree {k} ({}): {}\n", names.len(), names.join(", "));
        by_degree.push(json!({ "degree": k, "cells": names }));
    }
    text += &format!("euler characteristic {}\n", c.euler_characteristic());
    Ok(Report {
        text,
        json: json!({ "n": c.n, "relative": c.relative, "degrees": by_degree, "euler_characteristic": c.euler_characteristic() }),
        ok: true,
    })
}

fn boundary(args: &ComplexArgs, degree: Option<usize>) -> Result<Report, Failure> {
    let (graph, c) = complex(args)?;
    let degrees: Vec<usize> = match degree {
        Some(k) => {
            c.boundary_matrix(k)?;
            vec![k]
        }
        None => (1..=c.n).collect(),
    };
    let mut text = format!("oracle {}\n", oracle_name(c.oracle));
    let mut maps = Vec::new();
    for k in degrees {
        let d = c.boundary_matrix(k)?;
        text += &format!("d{k}: {} x {}\n", d.rows, d.cols);
        let mut entries = Vec::new();
        for ((r, col), e) in &d.entries {
            let (src, dst) = (c.cells[k][*col].describe(&graph), c.cells[k - 1][*r].describe(&graph));
            text += &format!("  {src} -> {dst}: {e}\n");
            entries.push(json!({ "row": r, "col": col, "from": src, "to": dst, "value": e.to_string() }));
        }
        maps.push(json!({ "degree": k, "rows": d.rows, "cols": d.cols, "entries": entries }));
    }
    let ok = c.is_chain_complex()?;
    text += &format!("d∘d = 0: {}\n", if ok { "yes" } else { "NO" });
    Ok(Report { text, json: json!({ "oracle": oracle_name(c.oracle), "maps": maps, "chain_complex": ok }), ok })
}

fn homology(args: &ComplexArgs, coeff: &str) -> Result<Report, Failure> {
    let (_, c) = complex(args)?;
    let spec = Specialization::parse(c.params, coeff)?;
    let h = bm_homology(&c, &spec)?;
    let mut text = format!("oracle {}\ncoefficients {} (dimension {})\n", oracle_name(c.oracle), h.specialization, h.coefficient_dim);
    for d in &h.degrees {
        text += &format!("H{}: rank {}", d.degree, d.rank);
        if !d.torsion.is_empty() {
            text += &format!(", torsion {}", d.torsion.iter().map(|t| format!("Z/{t}")).collect::<Vec<_>>().join(" + "));
        }
        text += "\n";
    }
    Ok(Report { text, json: json!({ "oracle": oracle_name(c.oracle), "homology": h }), ok: true })
}

fn phi(word: &str, model: &str, n: usize) -> Result<Report, Failure> {
    let (g, m) = parse_model(model)?;
    let params = SurfaceParams::new(g, m)?;
    let w = BraidWord::parse(word)?;
    let h = phi_eval(&w, params, n)?;
    Ok(Report {
        text: format!("{h}\n"),
        json: json!({ "word": w.to_string(), "k": h.k.to_string(), "x": h.x.iter().map(|v| v.to_string()).collect::<Vec<_>>(), "normal_form": h.to_string() }),
        ok: true,
    })
}

fn matrix_json(m: &RingMatrix) -> Value {
    json!(m.iter().map(|r| r.iter().map(|e| e.to_string()).collect::<Vec<_>>()).collect::<Vec<_>>())
}

fn twist_matrices() -> Result<Report, Failure> {
    let mut text = format!("basis {}\n", BASIS.join(", "));
    let mut out = serde_json::Map::new();
    for (name, t) in [("M_a", Twist::Ta), ("M_b", Twist::Tb)] {
        let m = twist_matrix(t)?;
        text += &format!("{name}:\n{}\n", render_matrix(&m));
        out.insert(name.into(), matrix_json(&m));
    }
    Ok(Report { text, json: json!({ "basis": BASIS, "matrices": out }), ok: true })
}

fn verify(twists: bool, model: &str, n: usize) -> Result<Report, Failure> {
    let mut text = String::new();
    let mut checks = Vec::new();
    let mut ok = true;
    if !twists {
        let (g, m) = parse_model(model)?;
        let rep = check_relations(SurfaceParams::new(g, m)?, n)?;
        for f in &rep.families {
            let pass = f.failures.is_empty();
            ok &= pass;
            text += &format!("{} relation {} ({} instances)\n", status(pass), f.name, f.instances);
            checks.push(json!({ "name": f.name, "instances": f.instances, "passed": pass }));
        }
    }
    for c in verify_identities()? {
        ok &= c.passed;
        text += &format!("{} {}\n", status(c.passed), c.name);
        checks.push(json!({ "name": c.name, "passed": c.passed }));
    }
    Ok(Report { text, json: json!({ "checks": checks }), ok })
}

fn status(ok: bool) -> &'static str {
    if ok {
        "PASS"
    } else {
        "FAIL"
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (name, result) = match &cli.command {
        Command::Invariants { source } => ("invariants", invariants(source)),
        Command::Cells { args } => ("cells", cells(args)),
        Command::Boundary { args, degree } => ("boundary", boundary(args, *degree)),
        Command::Homology { args, coeff } => ("homology", homology(args, coeff)),
        Command::Phi { word, model, n } => ("phi", phi(word, model, *n)),
        Command::TwistMatrices => ("twist-matrices", twist_matrices()),
        Command::Verify { twists, model, n } => ("verify", verify(*twists, model, *n)),
    };
    match result {
        Ok(r) => {
            emit(cli.format, &r);
            if r.ok {
                println!("RESULT {name} ok");
                ExitCode::SUCCESS
            } else {
                println!("RESULT {name} fail");
                ExitCode::from(1)
            }
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            println!("RESULT {name} error");
            ExitCode::from(2)
        }
    }
}

fn emit(format: Format, r: &Report) {
    match format {
        Format::Text => print!("{}", r.text),
        Format::Json => println!("{}", serde_json::to_string_pretty(&r.json).expect("serializable")),
    }
}
