use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use sl3_blocks::analysis::{
    check_gorenstein_divisibility, check_normal, h_vector, indecomposables_up_to, relation_connectivity,
};
use sl3_blocks::classical::verify_presentation_relation;
use sl3_blocks::global::{global_dim, global_dim_fusion_oracle, hilbert_function, multigraded_table, GlobalPoint};
use sl3_blocks::graphs::{parse_graph, TrivalentGraph};
use sl3_blocks::local::{classical_count, enumerate_triangles, markov_element, Triangle};
use sl3_blocks::verlinde::verlinde;
use sl3_blocks::weights::{fusion_dim, triple_invariant_dim, Weight};

/// Conformal block dimensions and semigroup checks for SL3.
///
/// Output is a JSON object {"query":{...},"result":...,"checks":[...]} on
/// stdout, or CSV with --csv. CSV columns per subcommand:
///   dim: dim[,oracle]          fusion: fusion        classical: classical,bz_triangles
///   verlinde: dim,value,residual,torus_order
///   hilbert: level,h   (with --multigraded: level,w1,...,wn,dim)
///   generators: level,point    check: check,passed,detail
///   markov: part,corners,hexagon    verify-presentation: pairing,anticyclic,holds
/// Exit status: 0 success, 1 failed check, 2 input error.
#[derive(Parser, Debug)]
#[command(name = "sl3cb", version, verbatim_doc_comment)]
struct Cli {
    /// Emit CSV instead of JSON.
    #[arg(long, global = true)]
    csv: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct GraphArg {
    /// Builder shorthand (caterpillar:n, gamma:g,n, dumbbell, theta) or inline JSON.
    #[arg(long, conflicts_with = "graph_file", required_unless_present = "graph_file")]
    graph: Option<String>,
    /// JSON graph description file.
    #[arg(long)]
    graph_file: Option<PathBuf>,
}

impl GraphArg {
    fn load(&self) -> Result<(String, TrivalentGraph), String> {
        let (label, text) = match (&self.graph, &self.graph_file) {
            (Some(g), _) => (g.clone(), g.clone()),
            (None, Some(path)) => {
                let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
                (path.display().to_string(), text)
            }
            (None, None) => return Err("one of --graph or --graph-file is required".into()),
        };
        let g = parse_graph(text.trim()).map_err(|e| e.to_string())?;
        Ok((label, g))
    }
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Conformal block dimension over a graph.
    Dim {
        #[command(flatten)]
        graph: GraphArg,
        /// Leaf weights as `a,b` tokens in leaf-label order.
        #[arg(long, num_args = 0..)]
        weights: Vec<Weight>,
        #[arg(long)]
        level: u32,
        /// Cross-check against the fusion-coefficient sum-product.
        #[arg(long)]
        oracle: bool,
    },
    /// Level-L fusion coefficient of three weights.
    Fusion {
        #[arg(long, num_args = 3, required = true)]
        weights: Vec<Weight>,
        #[arg(long)]
        level: u32,
    },
    /// Dimension of the invariants in a triple tensor product.
    Classical {
        #[arg(long, num_args = 3, required = true)]
        weights: Vec<Weight>,
    },
    /// Verlinde formula with a calibrated torus order.
    Verlinde {
        #[arg(long)]
        genus: u32,
        #[arg(long, num_args = 0..)]
        weights: Vec<Weight>,
        #[arg(long)]
        level: u32,
    },
    /// Hilbert function h(0..=max-level), or the multigraded table at each level.
    Hilbert {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        max_level: u32,
        #[arg(long)]
        multigraded: bool,
        /// Leaf-weight bound a+b for --multigraded.
        #[arg(long, default_value_t = 1)]
        max_weight_level: u32,
    },
    /// Indecomposable points up to a level.
    Generators {
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        max_level: u32,
    },
    /// Structural checks.
    Check {
        kind: CheckKind,
        #[command(flatten)]
        graph: GraphArg,
        #[arg(long)]
        max_level: u32,
        /// Largest exchange allowed between factorizations (relations).
        #[arg(long, default_value_t = 3)]
        move_degree: usize,
        /// Largest allowed generator level (generation); 1 for trees, 3 otherwise.
        #[arg(long)]
        expect_max: Option<u32>,
    },
    /// The kernel generator of the triangle boundary map.
    Markov,
    /// The cubic relation among the classical invariants.
    VerifyPresentation,
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum CheckKind {
    Normal,
    Gorenstein,
    Generation,
    Relations,
}

struct Report {
    query: Value,
    result: Value,
    checks: Vec<Value>,
    csv: Vec<Vec<String>>,
}

impl Report {
    fn new(query: Value, result: Value) -> Self {
        Report { query, result, checks: Vec::new(), csv: Vec::new() }
    }

    fn check(&mut self, name: &str, passed: bool, detail: Value) {
        self.checks.push(json!({"name": name, "passed": passed, "detail": detail}));
    }

    fn rows(mut self, rows: Vec<Vec<String>>) -> Self {
        self.csv = rows;
        self
    }

    fn passed(&self) -> bool {
        self.checks.iter().all(|c| c["passed"] == json!(true))
    }
}

fn weights_json(ws: &[Weight]) -> Value {
    json!(ws.iter().map(|w| w.to_string()).collect::<Vec<_>>())
}

fn point_json(g: &TrivalentGraph, p: &GlobalPoint) -> Value {
    json!({
        "level": p.level(),
        "vertices": p.points().iter().map(|q| q.to_string()).collect::<Vec<_>>(),
        "leaf_weights": weights_json(&p.leaf_weights(g)),
    })
}

fn triangle_json(t: &Triangle) -> Value {
    json!({"corners": t.corners, "hexagon": t.hexagon})
}

fn row<I: IntoIterator<Item = T>, T: ToString>(items: I) -> Vec<String> {
    items.into_iter().map(|x| x.to_string()).collect()
}

fn run(cmd: Command) -> Result<Report, String> {
    let err = |e: &dyn std::fmt::Display| e.to_string();
    Ok(match cmd {
        Command::Dim { graph, weights, level, oracle } => {
            let (label, g) = graph.load()?;
            let d = global_dim(&g, &weights, level).map_err(|e| err(&e))?;
            let query = json!({"command": "dim", "graph": label, "weights": weights_json(&weights), "level": level});
            let mut r = Report::new(query, json!({"dim": d}));
            let mut header = vec!["dim".to_string()];
            let mut values = vec![d.to_string()];
            if oracle {
                let o = global_dim_fusion_oracle(&g, &weights, level).map_err(|e| err(&e))?;
                r.check("fusion-oracle", o == d, json!({"oracle": o}));
                header.push("oracle".into());
                values.push(o.to_string());
            }
            r.rows(vec![header, values])
        }
        Command::Fusion { weights, level } => {
            let f = fusion_dim(weights[0], weights[1], weights[2], level);
            let query = json!({"command": "fusion", "weights": weights_json(&weights), "level": level});
            Report::new(query, json!({"fusion": f})).rows(vec![row(["fusion"]), row([f])])
        }
        Command::Classical { weights } => {
            let abc = [weights[0], weights[1], weights[2]];
            let c = classical_count(&abc);
            let bz = enumerate_triangles(&abc).len() as u64;
            let mut r = Report::new(json!({"command": "classical", "weights": weights_json(&weights)}), json!({"classical": c, "bz_triangles": bz}));
            r.check("tensor-multiplicity", c == triple_invariant_dim(abc[0], abc[1], abc[2]), json!({}));
            r.check("bz-triangle-count", c == bz, json!({}));
            r.rows(vec![row(["classical", "bz_triangles"]), row([c, bz])])
        }
        Command::Verlinde { genus, weights, level } => {
            let v = verlinde(genus, &weights, level).map_err(|e| err(&e))?;
            let torus = sl3_blocks::verlinde::calibrate_torus_order(level).map_err(|e| err(&e))?;
            let query = json!({"command": "verlinde", "genus": genus, "weights": weights_json(&weights), "level": level});
            let result = json!({"dim": v.dim, "value": v.value, "residual": v.residual, "torus_order": torus});
            Report::new(query, result).rows(vec![
                row(["dim", "value", "residual", "torus_order"]),
                vec![v.dim.to_string(), v.value.to_string(), v.residual.to_string(), torus.to_string()],
            ])
        }
        Command::Hilbert { graph, max_level, multigraded, max_weight_level } => {
            let (label, g) = graph.load()?;
            let mut query = json!({"command": "hilbert", "graph": label, "max_level": max_level});
            if multigraded {
                query["max_weight_level"] = json!(max_weight_level);
                let mut header = vec!["level".to_string()];
                header.extend((1..=g.n_leaves()).map(|i| format!("w{i}")));
                header.push("dim".into());
                let mut rows = vec![header];
                let mut levels = Vec::new();
                for level in 0..=max_level {
                    let table = multigraded_table(&g, max_weight_level, level);
                    let entries: Vec<Value> = table
                        .iter()
                        .map(|(ws, d)| {
                            let mut r = vec![level.to_string()];
                            r.extend(ws.iter().map(|w| w.to_string()));
                            r.push(d.to_string());
                            rows.push(r);
                            json!({"weights": weights_json(ws), "dim": d})
                        })
                        .collect();
                    levels.push(json!({"level": level, "table": entries}));
                }
                Report::new(query, json!({"multigraded": levels})).rows(rows)
            } else {
                let h = hilbert_function(&g, max_level);
                let mut rows = vec![row(["level", "h"])];
                rows.extend(h.iter().enumerate().map(|(l, v)| row([l as u64, *v])));
                Report::new(query, json!({"hilbert": h})).rows(rows)
            }
        }
        Command::Generators { graph, max_level } => {
            let (label, g) = graph.load()?;
            let r = indecomposables_up_to(&g, max_level).map_err(|e| err(&e))?;
            let query = json!({"command": "generators", "graph": label, "max_level": max_level});
            let result = json!({
                "max_level": r.max_level,
                "search_bound": r.search_bound,
                "counts_by_level": r.counts_by_level,
                "points": r.points.iter().map(|p| point_json(&g, p)).collect::<Vec<_>>(),
            });
            let mut rows = vec![row(["level", "point"])];
            rows.extend(r.points.iter().map(|p| vec![p.level().to_string(), p.to_string()]));
            Report::new(query, result).rows(rows)
        }
        Command::Check { kind, graph, max_level, move_degree, expect_max } => {
            let (label, g) = graph.load()?;
            let name = format!("{kind:?}").to_lowercase();
            let mut query = json!({"command": "check", "check": name, "graph": label, "max_level": max_level});
            let (passed, result) = match kind {
                CheckKind::Normal => {
                    let ok = check_normal(&g, max_level).map_err(|e| err(&e))?;
                    (ok, json!({"normal": ok}))
                }
                CheckKind::Relations => {
                    query["move_degree"] = json!(move_degree);
                    let ok = relation_connectivity(&g, move_degree, max_level).map_err(|e| err(&e))?;
                    (ok, json!({"connected": ok}))
                }
                CheckKind::Generation => {
                    let bound = expect_max.unwrap_or(if g.is_tree() { 1 } else { 3 });
                    query["expect_max"] = json!(bound);
                    let r = indecomposables_up_to(&g, max_level).map_err(|e| err(&e))?;
                    (r.max_level <= bound, json!({"max_level": r.max_level, "counts_by_level": r.counts_by_level}))
                }
                CheckKind::Gorenstein => {
                    let r = check_gorenstein_divisibility(&g, max_level).map_err(|e| err(&e))?;
                    let hv = match h_vector(&g, max_level) {
                        Ok(h) => json!(h),
                        Err(e) => json!({"error": e.to_string()}),
                    };
                    let result = json!({
                        "omega": point_json(&g, &r.omega),
                        "facet_count": r.facet_count,
                        "rank": r.rank,
                        "verified_up_to": r.verified_up_to,
                        "omega_interior": r.omega_interior,
                        "interior_points": r.interior_points,
                        "failures": r.failures,
                        "h_vector": hv,
                    });
                    (r.passed, result)
                }
            };
            let mut r = Report::new(query, result.clone());
            r.check(&name, passed, json!({}));
            r.rows(vec![row(["check", "passed", "detail"]), vec![name, passed.to_string(), result.to_string()]])
        }
        Command::Markov => {
            let (pos, neg) = markov_element();
            let result = json!({"positive": triangle_json(&pos), "negative": triangle_json(&neg)});
            let mut r = Report::new(json!({"command": "markov"}), result);
            r.check("same-boundary", pos.boundary() == neg.boundary(), json!({}));
            let fmt = |t: &Triangle| (format!("{:?}", t.corners), format!("{:?}", t.hexagon));
            let (pc, ph) = fmt(&pos);
            let (nc, nh) = fmt(&neg);
            r.rows(vec![row(["part", "corners", "hexagon"]), vec!["positive".into(), pc, ph], vec!["negative".into(), nc, nh]])
        }
        Command::VerifyPresentation => {
            let c = verify_presentation_relation();
            let tried: Vec<Value> = c
                .tried
                .iter()
                .map(|(conv, ok)| json!({"pairing": format!("{:?}", conv.pairing), "anticyclic": format!("{:?}", conv.anticyclic), "holds": ok}))
                .collect();
            let mut rows = vec![row(["pairing", "anticyclic", "holds"])];
            rows.extend(c.tried.iter().map(|(conv, ok)| {
                vec![format!("{:?}", conv.pairing), format!("{:?}", conv.anticyclic), ok.to_string()]
            }));
            let mut r = Report::new(json!({"command": "verify-presentation"}), json!({"holds": c.holds, "tried": tried}));
            r.check("relation", c.holds, json!({}));
            r.rows(rows)
        }
    })
}

fn csv_line(fields: &[String]) -> String {
    fields
        .iter()
        .map(|f| if f.contains([',', '"', '\n']) { format!("\"{}\"", f.replace('"', "\"\"")) } else { f.clone() })
        .collect::<Vec<_>>()
        .join(",")
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(report) => {
            let text = if cli.csv {
                report.csv.iter().map(|r| csv_line(r) + "\n").collect::<String>()
            } else {
                let out = json!({"query": report.query, "result": report.result, "checks": report.checks});
                serde_json::to_string_pretty(&out).expect("json values serialize") + "\n"
            };
            // a closed pipe downstream is not an error worth reporting
            let _ = std::io::stdout().write_all(text.as_bytes());
            if report.passed() {
                ExitCode::SUCCESS
            } else {
                eprintln!("check failed");
                ExitCode::from(1)
            }
        }
        Err(msg) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
