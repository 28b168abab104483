//! wasm-bindgen front end for the browser demo.
//!
//! Every export takes plain strings and numbers and returns a JSON string.
//! Failures come back as `{"error": "..."}` so the page never has to catch
//! exceptions, and the same functions run unchanged in native tests.

use serde::Serialize;
use wasm_bindgen::prelude::*;

use turnpike::circular::solve_circular;
use turnpike::distset::{
    circular_pairwise_distances, pairwise_distances, DistanceSet, IntegerSet, ModularParams,
};
use turnpike::harness::{gen_instance, run_grid, Mode, TrialGrid};
use turnpike::linear::{solve, SolverConfig};
use turnpike::unigraph::{
    build_circular_uniqueness_graph, build_uniqueness_graph, UniquenessGraph,
};

#[derive(Serialize)]
struct Failure {
    error: String,
}

fn to_json<T: Serialize>(r: Result<T, String>) -> String {
    let out = match r {
        Ok(v) => serde_json::to_string(&v),
        Err(error) => serde_json::to_string(&Failure { error }),
    };
    out.unwrap_or_else(|e| format!("{{\"error\":\"{e}\"}}"))
}

fn parse_set(text: &str) -> Result<IntegerSet, String> {
    let set: IntegerSet = text.parse().map_err(|e: turnpike::Error| e.to_string())?;
    if set.is_empty() {
        return Err("enter at least one integer".into());
    }
    Ok(set)
}

fn modulus(n: u32) -> Result<Option<ModularParams>, String> {
    match n {
        0 => Ok(None),
        n => ModularParams::new(n.into())
            .map(Some)
            .map_err(|e| e.to_string()),
    }
}

fn values<'a>(s: impl IntoIterator<Item = &'a u64>) -> Vec<u64> {
    s.into_iter().copied().collect()
}

fn opt_values(s: Option<&IntegerSet>) -> Vec<u64> {
    s.map(values).unwrap_or_default()
}

#[derive(Serialize)]
struct Distances {
    set: Vec<u64>,
    distances: Vec<u64>,
}

/// Distance set of `set`; `modulus = 0` means linear distances.
#[wasm_bindgen]
pub fn distances(set: &str, modulus_n: u32) -> String {
    to_json((|| {
        let v = parse_set(set)?;
        let w = match modulus(modulus_n)? {
            Some(m) => circular_pairwise_distances(&v, m).map_err(|e| e.to_string())?,
            None => pairwise_distances(&v),
        };
        Ok(Distances {
            set: values(&v),
            distances: values(&w),
        })
    })())
}

#[derive(Serialize)]
struct Solution {
    recovered: Option<Vec<u64>>,
    failure: Option<String>,
    u01: Option<u64>,
    u02: Option<u64>,
    first_intersection: Vec<u64>,
    vertices: Vec<u64>,
    edges: Vec<(u64, u64)>,
    certified: Vec<u64>,
    anchors: Vec<u64>,
    candidate: Vec<u64>,
    path: Option<String>,
}

fn edges(g: &UniquenessGraph) -> Vec<(u64, u64)> {
    g.edges().to_vec()
}

/// Runs the solver on a distance set and returns the result together with
/// its intermediate sets. `modulus = 0` selects the linear solver.
#[wasm_bindgen]
pub fn solve_distances(distances: &str, modulus_n: u32, anchors: u32) -> String {
    to_json((|| {
        let w: DistanceSet = parse_set(distances)?.into();
        let cfg = SolverConfig {
            t_override: (anchors > 0).then_some(anchors as usize),
            ..SolverConfig::default()
        };
        match modulus(modulus_n)? {
            None => {
                let out = solve(&w, &cfg).map_err(|e| e.to_string())?;
                let d = &out.diagnostics;
                let t = &d.trace;
                let graph = t.graph_vertices.as_ref().map(build_uniqueness_graph);
                Ok(Solution {
                    recovered: out.recovered().map(values),
                    failure: match &out.status {
                        turnpike::SolveStatus::Failed(r) => Some(r.to_string()),
                        turnpike::SolveStatus::Recovered(_) => None,
                    },
                    u01: d.u01,
                    u02: None,
                    first_intersection: t
                        .first_intersection
                        .as_ref()
                        .map(values)
                        .unwrap_or_default(),
                    vertices: opt_values(t.graph_vertices.as_ref()),
                    edges: graph.as_ref().map(edges).unwrap_or_default(),
                    certified: opt_values(t.certified.as_ref()),
                    anchors: opt_values(t.anchors.as_ref()),
                    candidate: t.survivors.as_ref().map(values).unwrap_or_default(),
                    path: d.path.map(|p| p.to_string()),
                })
            }
            Some(m) => {
                let out = solve_circular(&w, m, &cfg).map_err(|e| e.to_string())?;
                let d = &out.diagnostics;
                let graph = match &d.graph_vertices {
                    Some(z) => {
                        Some(build_circular_uniqueness_graph(z, m).map_err(|e| e.to_string())?)
                    }
                    None => None,
                };
                Ok(Solution {
                    recovered: out.recovered().map(values),
                    failure: match &out.status {
                        turnpike::CircularStatus::Failed(r) => Some(r.to_string()),
                        turnpike::CircularStatus::Recovered(_) => None,
                    },
                    u01: d.u01,
                    u02: d.u02,
                    first_intersection: Vec::new(),
                    vertices: opt_values(d.graph_vertices.as_ref()),
                    edges: graph.as_ref().map(edges).unwrap_or_default(),
                    certified: opt_values(d.certified.as_ref()),
                    anchors: opt_values(d.anchors.as_ref()),
                    candidate: opt_values(d.candidate.as_ref()),
                    path: None,
                })
            }
        }
    })())
}

#[derive(Serialize)]
struct Instance {
    set: Vec<u64>,
    distances: Vec<u64>,
}

/// A seeded random `k`-subset of `{0, ..., n-1}` and its distance set.
#[wasm_bindgen]
pub fn random_instance(n: u32, k: u32, seed: u32, modulus_n: u32) -> String {
    to_json((|| {
        let v = gen_instance(n.into(), k.into(), seed.into()).map_err(|e| e.to_string())?;
        let w = match modulus(modulus_n)? {
            Some(m) => circular_pairwise_distances(&v, m).map_err(|e| e.to_string())?,
            None => pairwise_distances(&v),
        };
        Ok(Instance {
            set: values(&v),
            distances: values(&w),
        })
    })())
}

#[derive(Serialize)]
struct CurvePoint {
    k: u64,
    trials: u64,
    successes: u64,
    rate: f64,
}

/// Success rate against `k` for one `n`. `ks` is a comma or space separated
/// list. Runs single-threaded, so keep `trials` modest.
#[wasm_bindgen]
pub fn success_curve(n: u32, ks: &str, trials: u32, seed: u32, circular: bool) -> String {
    to_json((|| {
        let ks: Vec<u64> = ks
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|s| !s.is_empty())
            .map(|s| s.parse::<u64>().map_err(|_| format!("bad k: {s}")))
            .collect::<Result<_, _>>()?;
        let mode = if circular {
            Mode::Circular
        } else {
            Mode::Linear
        };
        let grid = TrialGrid::new(vec![n.into()], ks, trials.into(), seed.into(), mode);
        let records = run_grid(&grid).map_err(|e| e.to_string())?;
        Ok(records
            .into_iter()
            .map(|r| CurvePoint {
                k: r.k,
                trials: r.trials,
                successes: r.successes,
                rate: r.success_rate,
            })
            .collect::<Vec<_>>())
    })())
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::Value;

    fn json(s: &str) -> Value {
        serde_json::from_str(s).unwrap()
    }

    #[test]
    fn linear_distances() {
        let v = json(&distances("0 1 5", 0));
        assert_eq!(v["distances"], json("[0,1,4,5]"));
        let v = json(&distances("0 1 4", 13));
        assert_eq!(v["distances"], json("[0,1,3,4,9,10,12]"));
        assert!(json(&distances("", 0))["error"].is_string());
        assert!(json(&distances("1 2 x", 0))["error"].is_string());
    }

    #[test]
    fn solves_five_points() {
        let v = json(&solve_distances("0 3 8 11 13 18 26 29 31 39 42", 0, 0));
        assert_eq!(v["recovered"], json("[0,3,11,29,42]"));
        assert_eq!(v["u01"], 3);
        assert!(v["edges"].as_array().is_some_and(|e| !e.is_empty()));
        assert!(v["failure"].is_null());
    }

    #[test]
    fn solves_small_ring() {
        let v = json(&solve_distances("0 1 3 4 9 10 12", 13, 0));
        assert_eq!(v["recovered"], json("[0,1,4]"));
        assert_eq!(v["u02"], 4);
    }

    #[test]
    fn reports_failure_and_errors() {
        let v = json(&solve_distances("0 1 5", 0, 0));
        assert!(v["recovered"].is_null());
        assert!(v["failure"].is_string());
        assert!(json(&solve_distances("0 1", 13, 0))["error"].is_string());
    }

    #[test]
    fn random_round_trip() {
        let inst = json(&random_instance(500, 6, 4, 0));
        let w: Vec<String> = inst["distances"]
            .as_array()
            .unwrap()
            .iter()
            .map(|x| x.to_string())
            .collect();
        let v = json(&solve_distances(&w.join(" "), 0, 0));
        let d = json(&distances(
            &v["recovered"]
                .as_array()
                .unwrap()
                .iter()
                .map(|x| x.to_string())
                .collect::<Vec<_>>()
                .join(" "),
            0,
        ));
        assert_eq!(d["distances"], inst["distances"]);
        assert!(json(&random_instance(4, 8, 0, 0))["error"].is_string());
    }

    #[test]
    fn curve_points() {
        let v = json(&success_curve(256, "3, 6,9", 20, 1, false));
        let pts = v.as_array().unwrap();
        assert_eq!(pts.len(), 3);
        assert_eq!(pts[0]["k"], 3);
        assert_eq!(pts[0]["trials"], 20);
        assert!(json(&success_curve(256, "3,a", 20, 1, false))["error"].is_string());
        assert!(json(&success_curve(256, "300", 20, 1, true))["error"].is_string());
    }
}
