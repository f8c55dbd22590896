use std::fmt::Write as _;

use coherence_lattice::entangle::{conversion_plan, cnot_embed, SchmidtVector};
use coherence_lattice::lattice::{compare, join, meet};
use coherence_lattice::mixed::{
    block_decompose, deterministic_mixed_feasible, ensemble_obtainable, ensemble_ocr_probability, mixed_pct_plan,
    search_partition, DensityMatrix, Ensemble, ProjectorPartition,
};
use coherence_lattice::protocols::{compare_protocols, plan, ProtocolKind, ProtocolPlan};
use coherence_lattice::sim::{simulate, ProtocolChoice, SimConfig};
use coherence_lattice::transform::{ladder, max_probability, PureState};
use coherence_lattice::{Error, Execution, ProbVector, Scalar};
use serde_json::{json, Value};

use crate::{load, CliError, Command, Globals, Output, ProtocolArg};

pub fn name(cmd: &Command) -> &'static str {
    match cmd {
        Command::Compare { .. } => "compare",
        Command::Meet { .. } => "meet",
        Command::Join { .. } => "join",
        Command::Ladder { .. } => "ladder",
        Command::Plan { .. } => "plan",
        Command::Simulate { .. } => "simulate",
        Command::MixedCheck { .. } => "mixed-check",
        Command::EnsembleOcr { .. } => "ensemble-ocr",
        Command::EntConvert { .. } => "ent-convert",
    }
}

fn vector<S: Scalar>(arg: &str) -> Result<ProbVector<S>, CliError> {
    Ok(ProbVector::from_json(&load(arg)?)?)
}

fn vectors<S: Scalar>(args: &[String]) -> Result<Vec<ProbVector<S>>, CliError> {
    args.iter().map(|a| vector(a)).collect()
}

fn choice(p: ProtocolArg) -> ProtocolChoice {
    match p {
        ProtocolArg::Greedy => ProtocolChoice::Greedy,
        ProtocolArg::Thrifty => ProtocolChoice::Thrifty,
        ProtocolArg::Both => ProtocolChoice::Both,
    }
}

fn plan_text<S: Scalar>(p: &ProtocolPlan<S>) -> String {
    let mut s = String::new();
    let pivot = match p.kind {
        ProtocolKind::Greedy => "join",
        ProtocolKind::Thrifty => "meet",
    };
    let _ = writeln!(s, "{} protocol", p.kind.as_str());
    let _ = writeln!(s, "  {pivot}:          {}", p.lattice_state);
    let _ = writeln!(s, "  intermediate:  {}", p.intermediate);
    let _ = writeln!(s, "  success prob:  {}", p.success_probability);
    match &p.residual {
        Some(r) => {
            let _ = writeln!(s, "  residual:      {r}");
        }
        None => {
            let _ = writeln!(s, "  deterministic");
        }
    }
    s.trim_end().to_string()
}

pub fn run<S: Scalar>(cmd: &Command, globals: &Globals) -> Result<Output, CliError> {
    match cmd {
        Command::Compare { a, b } => {
            let (a, b) = (vector::<S>(a)?, vector::<S>(b)?);
            let order = compare(&a, &b)?;
            let json = json!({"a": a.to_json(), "b": b.to_json(), "order": order});
            let text = match serde_json::to_value(order).expect("enum") {
                Value::String(s) => s,
                other => other.to_string(),
            };
            Ok(Output { json, text })
        }
        Command::Meet { inputs } | Command::Join { inputs } => {
            let set = vectors::<S>(inputs)?;
            let result = if matches!(cmd, Command::Meet { .. }) { meet(&set)? } else { join(&set)? };
            Ok(Output { json: json!({"result": result.to_json()}), text: result.to_string() })
        }
        Command::Ladder { psi, phi } => {
            let (psi, phi) = (vector::<S>(psi)?, vector::<S>(phi)?);
            let q = max_probability(&psi, &phi)?;
            let lad = ladder(&psi, &phi)?;
            let mut text = format!("max probability: {q}\n");
            for (j, step) in lad.steps().iter().enumerate() {
                let _ = writeln!(text, "  q{} = {}  (l = {})", j + 1, step.q, step.l);
            }
            Ok(Output {
                json: json!({"max_probability": q.to_json(), "ladder": lad.to_json()}),
                text: text.trim_end().to_string(),
            })
        }
        Command::Plan { protocol, psi, phi } => {
            let (psi, phi) = (vector::<S>(psi)?, vector::<S>(phi)?);
            match protocol {
                ProtocolArg::Both => {
                    let c = compare_protocols(&psi, &phi)?;
                    let text = format!(
                        "{}\n{}\nthrifty residual ≺ greedy residual: {}\nentropy gain on failure: {:.6} bits",
                        plan_text(&c.greedy),
                        plan_text(&c.thrifty),
                        c.residual_order,
                        c.residual_entropy_gap
                    );
                    Ok(Output { json: c.to_json(), text })
                }
                one => {
                    let kind = if matches!(one, ProtocolArg::Greedy) { ProtocolKind::Greedy } else { ProtocolKind::Thrifty };
                    let p = plan(kind, &psi, &phi)?;
                    Ok(Output { json: json!({"plan": p.to_json()}), text: plan_text(&p) })
                }
            }
        }
        Command::Simulate { protocol, psi, phi, record_outcomes, serial } => {
            let (psi, phi) = (vector::<S>(psi)?, vector::<S>(phi)?);
            let cfg = SimConfig {
                seed: globals.seed,
                trials: globals.trials,
                protocol: choice(*protocol),
                record_outcomes: *record_outcomes,
                execution: if *serial { Execution::Serial } else { Execution::Parallel },
                ..SimConfig::default()
            };
            match simulate(&psi, &phi, &cfg) {
                Ok(report) => {
                    let mut text = format!(
                        "trials {}  seed {}  success {}/{}  rate {:.6}  (q1 = {}, 3σ = {:.6})\n",
                        report.trials,
                        report.seed,
                        report.successes,
                        report.trials,
                        report.empirical_success_rate,
                        report.success_probability_f64,
                        report.three_sigma
                    );
                    for s in &report.protocols {
                        let _ = writeln!(
                            text,
                            "  {:<8} mean entropy {}  failure-branch entropy {}",
                            s.protocol.as_str(),
                            fmt_opt(s.mean_entropy),
                            fmt_opt(s.mean_failure_entropy)
                        );
                    }
                    let mut json = report.to_json();
                    if let Value::Object(map) = &mut json {
                        map.remove("schema_version");
                        map.remove("mode");
                    }
                    Ok(Output { json, text: text.trim_end().to_string() })
                }
                Err(Error::DeterministicInstance) => {
                    let note = "deterministic instance: the target is reached with certainty, nothing to simulate";
                    Ok(Output { json: json!({"note": note, "success_probability": 1}), text: note.into() })
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::MixedCheck { rho, sigma, partition } => mixed_check(rho, sigma, partition.as_deref()),
        Command::EnsembleOcr { psi, targets, weights } => {
            let psi = vector::<S>(psi)?;
            let targets = vectors::<S>(targets)?;
            let r = ensemble_ocr_probability(&psi, &targets)?;
            let mut json = r.to_json();
            let mut text = format!("ocr state: {}\nprobability: {}\nsaturated: {}", r.state, r.probability, r.saturated());
            if let Some(w) = weights {
                let w = match load(w)? {
                    Value::Array(items) => items.iter().map(S::from_json).collect::<Result<Vec<_>, _>>()?,
                    _ => return Err(CliError::Usage("weights must be a JSON array".into())),
                };
                if w.len() != targets.len() {
                    return Err(CliError::Usage(format!("{} weights for {} targets", w.len(), targets.len())));
                }
                let ensemble = Ensemble::new(w.into_iter().zip(targets).collect())?;
                let ok = ensemble_obtainable(&psi, &ensemble)?;
                json["obtainable"] = ok.into();
                json["ensemble_average"] = ensemble.average()?.to_json();
                let _ = write!(text, "\nensemble obtainable: {ok}");
            }
            Ok(Output { json, text })
        }
        Command::EntConvert { psi, lambda, materialize } => {
            let psi = vector::<S>(psi)?;
            let lambda = SchmidtVector(vector::<S>(lambda)?);
            let r = conversion_plan(&psi, &lambda)?;
            let mut json = r.to_json();
            if *materialize {
                if let Some(fail) = &r.failure_schmidt {
                    let state = PureState::from_coherence_vector(&fail.0);
                    let full = cnot_embed(&state, true)?.full.expect("requested");
                    json["failure_state_amplitudes"] = full.iter().map(|a| json!([a.re, a.im])).collect();
                }
            }
            let mut text = format!("conversion probability: {}\nocr state: {}", r.probability, r.ocr_state);
            if let (Some(f), Some(h)) = (&r.failure_schmidt, r.failure_entropy) {
                let _ = write!(text, "\nfailure Schmidt vector: {}  (entanglement {h:.6} bits)", f.0);
            }
            Ok(Output { json, text })
        }
    }
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map_or_else(|| "-".into(), |x| format!("{x:.6}"))
}

fn mixed_check(rho: &str, sigma: &str, partition: Option<&str>) -> Result<Output, CliError> {
    let rho = DensityMatrix::from_json(&load(rho)?)?;
    let sigma = DensityMatrix::from_json(&load(sigma)?)?;
    let (partition, searched) = match partition {
        Some(p) => (ProjectorPartition::from_json(&load(p)?, rho.dim())?, false),
        None => match search_partition(&rho)? {
            Some(p) => (p, true),
            None => return Err(CliError::Domain(Error::InvalidPartition("no partition with pure blocks".into()))),
        },
    };
    let feasible = deterministic_mixed_feasible(&rho, &sigma, &partition)?;
    let mut json = json!({
        "mode": "float",
        "partition": partition.to_json(),
        "partition_searched": searched,
        "deterministic_feasible": feasible,
    });
    let mut text = format!("partition: {}{}\ndeterministic: {feasible}", partition.to_json(), if searched { " (searched)" } else { "" });
    match block_decompose(&rho, &partition) {
        Ok(_) => {
            let plan = mixed_pct_plan(&rho, &sigma, &partition)?;
            let _ = write!(
                text,
                "\njoint probability: {:.12}\nblock probabilities: {:?}",
                plan.joint_probability, plan.block_probabilities
            );
            json["plan"] = plan.to_json();
        }
        Err(Error::BlockNotPure { block }) => {
            json["block_not_pure"] = (block + 1).into();
            let _ = write!(text, "\nblock {} is not pure", block + 1);
        }
        Err(e) => return Err(e.into()),
    }
    Ok(Output { json, text })
}
