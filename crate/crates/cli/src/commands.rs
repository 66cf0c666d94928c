//! One function per subcommand, each returning a [`Report`].

use crate::{ClassArg, Example, Failure, LogicFormula, Report, FAILS, HOLDS, UNKNOWN};
use ilbench_core::correspondence::{correspondence_audit, FrameConditions};
use ilbench_core::data;
use ilbench_core::decide::{
    self, audit, bounded_refute, bounded_refute_with, canonical_model, enumerate_kl, fmp_bound, Countermodel,
    DecideError, ExactOracle, Mode, SearchOptions, Verdict, MAX_SEARCH_WORLDS,
};
use ilbench_core::genveltman::GenModel;
use ilbench_core::kernel::{self, declared_logic, theorem_library, FrameClass, Logic, Principle, Proof};
use ilbench_core::random::{random_gen_frame, random_veltman_frame};
use ilbench_core::semantics::{valuation_to_names, Skeleton, Validity, DEFAULT_VALUATION_BITS};
use ilbench_core::syntax::{adequate_closure, parse as parse_formula, Formula};
use ilbench_core::veltman::VeltmanModel;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use std::fs;
use std::path::Path;

fn formula(text: &str) -> Result<Formula, Failure> {
    parse_formula(text).map_err(|e| Failure::Usage(format!("formula `{text}`: {e}")))
}

fn logic(name: &str) -> Result<Logic, Failure> {
    Logic::by_name(name).map_err(|e| Failure::Usage(e.to_string()))
}

fn principle(name: &str) -> Result<Principle, Failure> {
    name.parse().map_err(|_| Failure::Usage(format!("`{name}` is not one of J1, J2, J2+, J4, J4+, J5")))
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::File(format!("{}: {e}", path.display())))
}

/// Reads a model (or a frame, with an empty valuation) in the given class,
/// or in whichever class the file parses as.
fn load_model(path: &Path, class: Option<ClassArg>) -> Result<Countermodel, Failure> {
    let text = read(path)?;
    let bad = |e: &dyn std::fmt::Display| Failure::File(format!("{}: {e}", path.display()));
    let veltman = || VeltmanModel::from_json(&text).map(Countermodel::Veltman);
    let gen = || GenModel::from_json(&text, false).map(Countermodel::Generalized);
    match class {
        Some(ClassArg::Veltman) => veltman().map_err(|e| bad(&e)),
        Some(ClassArg::Gen) => gen().map_err(|e| bad(&e)),
        None => veltman().or_else(|_| gen()).map_err(|e| bad(&e)),
    }
}

fn world(sk: &Skeleton, name: &str) -> Result<usize, Failure> {
    sk.index_of(name).map_err(|e| Failure::Usage(e.to_string()))
}

fn class_name(m: &Countermodel) -> String {
    m.class().to_string()
}

pub fn parse(text: &str) -> Result<Report, Failure> {
    let f = formula(text)?;
    let ops: Vec<String> = f.rhd_operands().iter().map(Formula::to_string).collect();
    Ok(Report::new(
        json!({
            "formula": f.to_string(),
            "unicode": f.unicode().to_string(),
            "size": f.size(),
            "depth": f.depth(),
            "vars": f.vars(),
            "rhd_operands": ops,
        }),
        HOLDS,
    ))
}

pub fn check_proof(path: &Path, logic_name: Option<&str>) -> Result<Report, Failure> {
    let text = read(path)?;
    let name = logic_name
        .or_else(|| declared_logic(&text))
        .ok_or_else(|| Failure::Usage("no --logic given and the file has no `// logic:` line".into()))?;
    let l = Logic::axiomatized(name).map_err(|e| Failure::Usage(e.to_string()))?;
    let checked = Proof::parse(&text).and_then(|p| kernel::check_proof(&l, &p).map(|c| (p.len(), c)));
    Ok(match checked {
        Ok((lines, conclusion)) => Report::new(
            json!({"logic": l.name(), "valid": true, "lines": lines, "conclusion": conclusion.to_string()}),
            HOLDS,
        ),
        Err(e) => Report::new(json!({"logic": l.name(), "valid": false, "error": e.to_string()}), FAILS),
    })
}

pub fn eval(path: &Path, text: &str, at: Option<&str>, class: Option<ClassArg>) -> Result<Report, Failure> {
    let m = load_model(path, class)?;
    let f = formula(text)?;
    let sk = m.skeleton();
    let ext: Vec<String> = (0..m.len()).filter(|&w| m.eval(w, &f)).map(|w| sk.name(w).to_string()).collect();
    let mut v = json!({"class": class_name(&m), "formula": f.to_string(), "true_at": ext});
    let holds = match at {
        Some(name) => {
            let w = world(sk, name)?;
            v["world"] = name.into();
            m.eval(w, &f)
        }
        None => ext.len() == m.len(),
    };
    v["holds"] = holds.into();
    Ok(Report::new(v, if holds { HOLDS } else { FAILS }))
}

pub fn valid(path: &Path, text: &str, class: Option<ClassArg>) -> Result<Report, Failure> {
    let m = load_model(path, class)?;
    let f = formula(text)?;
    let validity = match &m {
        Countermodel::Veltman(m) => m.frame.validity(&f, DEFAULT_VALUATION_BITS),
        Countermodel::Generalized(m) => m.frame.validity(&f, DEFAULT_VALUATION_BITS),
    };
    let mut v = json!({"class": class_name(&m), "formula": f.to_string()});
    let code = match validity {
        Ok(Validity::Valid) => {
            v["valid"] = true.into();
            HOLDS
        }
        Ok(Validity::Refuted { valuation, world }) => {
            v["valid"] = false.into();
            v["refutation"] =
                json!({"valuation": valuation_to_names(m.skeleton(), &valuation), "world": m.skeleton().name(world)});
            FAILS
        }
        Err(budget) => {
            v["valid"] = Value::Null;
            v["reason"] = budget.to_string().into();
            UNKNOWN
        }
    };
    Ok(Report::new(v, code))
}

fn conditions<F: FrameConditions>(frame: &F) -> Value {
    Principle::ALL
        .into_iter()
        .map(|p| (p.name().to_string(), json!({"holds": frame.satisfies(p), "violation": frame.violation(p)})))
        .collect::<serde_json::Map<_, _>>()
        .into()
}

pub fn frame_check(path: &Path, logic_name: Option<&str>, class: Option<ClassArg>) -> Result<Report, Failure> {
    let m = load_model(path, class)?;
    let mut v = json!({"class": class_name(&m)});
    v["conditions"] = match &m {
        Countermodel::Veltman(m) => conditions(&m.frame),
        Countermodel::Generalized(m) => conditions(&m.frame),
    };
    let mut code = HOLDS;
    if let Some(name) = logic_name {
        let l = logic(name)?;
        let ok = m.is_frame_for(&l);
        v["logic"] = l.name().into();
        v["frame_for_logic"] = ok.into();
        code = if ok { HOLDS } else { FAILS };
    }
    Ok(Report::new(v, code))
}

fn audit_value<F: FrameConditions>(frame: &F, p: Principle) -> Result<Value, Failure> {
    let report = correspondence_audit(frame, p, DEFAULT_VALUATION_BITS).map_err(|e| Failure::Usage(e.to_string()))?;
    let agrees = report.agrees();
    let mut v = serde_json::to_value(report).expect("reports serialize");
    v["agrees"] = agrees.into();
    Ok(v)
}

fn principles(scheme: Option<&str>) -> Result<Vec<Principle>, Failure> {
    Ok(match scheme {
        Some(s) => vec![principle(s)?],
        None => Principle::ALL.to_vec(),
    })
}

pub fn correspond(path: &Path, scheme: Option<&str>, class: Option<ClassArg>) -> Result<Report, Failure> {
    let m = load_model(path, class)?;
    let ps = principles(scheme)?;
    let audits = ps
        .iter()
        .map(|&p| match &m {
            Countermodel::Veltman(m) => audit_value(&m.frame, p),
            Countermodel::Generalized(m) => audit_value(&m.frame, p),
        })
        .collect::<Result<Vec<_>, _>>()?;
    let holds = audits.iter().all(|a| a["condition_holds"] == true);
    let v = if let [single] = audits.as_slice() {
        let mut v = single.clone();
        v["class"] = class_name(&m).into();
        v
    } else {
        json!({"class": class_name(&m), "audits": audits})
    };
    Ok(Report::new(v, if holds { HOLDS } else { FAILS }))
}

pub fn correspond_random(
    scheme: Option<&str>,
    class: Option<ClassArg>,
    samples: usize,
    seed: u64,
    max_worlds: usize,
) -> Result<Report, Failure> {
    if !(1..=6).contains(&max_worlds) {
        return Err(Failure::Usage(format!("--max-worlds must be between 1 and 6, not {max_worlds}")));
    }
    let ps = principles(scheme)?;
    let class = FrameClass::from(class.unwrap_or(ClassArg::Gen));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut disagreements = Vec::new();
    let mut holding = vec![0usize; ps.len()];
    for _ in 0..samples {
        let n = rng.gen_range(1..=max_worlds);
        let frame = match class {
            FrameClass::Veltman => Countermodel::Veltman(VeltmanModel {
                frame: random_veltman_frame(&mut rng, n),
                valuation: Default::default(),
            }),
            FrameClass::Generalized => Countermodel::Generalized(GenModel {
                frame: random_gen_frame(&mut rng, n),
                valuation: Default::default(),
            }),
        };
        for (i, &p) in ps.iter().enumerate() {
            let a = match &frame {
                Countermodel::Veltman(m) => audit_value(&m.frame, p)?,
                Countermodel::Generalized(m) => audit_value(&m.frame, p)?,
            };
            holding[i] += (a["condition_holds"] == true) as usize;
            if a["agrees"] != true {
                disagreements.push(json!({"frame": frame.to_json(), "audit": a}));
            }
        }
    }
    let counts: serde_json::Map<_, _> =
        ps.iter().zip(&holding).map(|(p, &h)| (p.name().to_string(), Value::from(h))).collect();
    let code = if disagreements.is_empty() { HOLDS } else { FAILS };
    Ok(Report::new(
        json!({
            "class": class.to_string(),
            "samples": samples,
            "seed": seed,
            "condition_holds": counts,
            "disagreements": disagreements,
        }),
        code,
    ))
}

fn budget(max_worlds: usize) -> Result<(), Failure> {
    if (1..=MAX_SEARCH_WORLDS).contains(&max_worlds) {
        Ok(())
    } else {
        Err(Failure::Usage(format!("--max-worlds must be between 1 and {MAX_SEARCH_WORLDS}, not {max_worlds}")))
    }
}

pub fn refute(target: &LogicFormula, max_worlds: usize, class: Option<ClassArg>) -> Result<Report, Failure> {
    let (l, a) = (logic(&target.logic)?, formula(&target.formula)?);
    budget(max_worlds)?;
    let opts = match class {
        Some(c) => SearchOptions { max_worlds, class: c.into() },
        None => SearchOptions::for_logic(&l, max_worlds),
    };
    let mut v =
        json!({"logic": l.name(), "formula": a.to_string(), "max_worlds": max_worlds, "class": opts.class.to_string()});
    Ok(match bounded_refute_with(&l, &a, opts) {
        Some(r) => {
            v["found"] = true.into();
            v["verified"] = r.verify(&l, &a).into();
            v["countermodel"] = r.to_json();
            Report::new(v, FAILS)
        }
        None => {
            v["found"] = false.into();
            Report::new(v, UNKNOWN)
        }
    })
}

pub fn decide(target: &LogicFormula, mode: Mode) -> Result<Report, Failure> {
    let (l, a) = (logic(&target.logic)?, formula(&target.formula)?);
    let mut v = json!({"logic": l.name(), "formula": a.to_string(), "mode": mode.to_string()});
    if mode == Mode::Exact {
        v["bound"] = fmp_bound(&l, &a).to_string().into();
    }
    let code = match decide::decide(&l, &a, mode) {
        Ok(Verdict::Theorem) => {
            v["verdict"] = "theorem".into();
            HOLDS
        }
        Ok(Verdict::NonTheorem(r)) => {
            v["verdict"] = "non-theorem".into();
            v["countermodel"] = r.to_json();
            FAILS
        }
        Ok(Verdict::Unknown) => {
            v["verdict"] = "unknown".into();
            UNKNOWN
        }
        Err(DecideError::BadBudget(n)) => return Err(Failure::Usage(DecideError::BadBudget(n).to_string())),
        Err(e) => {
            v["verdict"] = "unknown".into();
            v["reason"] = e.to_string().into();
            UNKNOWN
        }
    };
    Ok(Report::new(v, code))
}

pub fn canonical(target: &LogicFormula) -> Result<Report, Failure> {
    let (l, a) = (logic(&target.logic)?, formula(&target.formula)?);
    let mut v = json!({"logic": l.name(), "formula": a.to_string()});
    let unknown = |mut v: Value, e: DecideError| {
        v["verdict"] = "unknown".into();
        v["reason"] = e.to_string().into();
        Ok(Report::new(v, UNKNOWN))
    };
    let ctx = adequate_closure(std::slice::from_ref(&a));
    let kl = match enumerate_kl(&l, &ctx, &ExactOracle::default()) {
        Ok(kl) => kl,
        Err(e) => return unknown(v, e),
    };
    v["closure_size"] = ctx.len().into();
    v["kl_size"] = kl.len().into();
    v["max_rank"] = kl.max_rank().into();
    v["prec_lemmas"] = match kl.audit_prec_lemmas() {
        Ok(()) => "hold".into(),
        Err(e) => e.to_string().into(),
    };
    match canonical_model(&kl, &a) {
        Ok(m) => {
            v["verdict"] = "non-theorem".into();
            v["audit"] = match audit(&kl, &m) {
                Ok(()) => "passed".into(),
                Err(e) => e.to_string().into(),
            };
            v["refuted_at_root"] = (!m.model.eval(m.root, &a)).into();
            v["canonical"] = m.to_json(&kl);
            Ok(Report::new(v, FAILS))
        }
        Err(DecideError::Proved(_)) => {
            v["verdict"] = "theorem".into();
            Ok(Report::new(v, HOLDS))
        }
        Err(e) => unknown(v, e),
    }
}

pub fn library_verify(dir: Option<&Path>) -> Result<Report, Failure> {
    let mut results = Vec::new();
    match dir {
        None => {
            for e in theorem_library() {
                let checked = kernel::check_proof(&e.logic, &e.proof).map(|c| c == e.statement);
                results.push(json!({
                    "name": e.name,
                    "logic": e.logic.name(),
                    "statement": e.statement.to_string(),
                    "ok": checked == Ok(true),
                    "error": checked.err().map(|e| e.to_string()),
                }));
            }
        }
        Some(dir) => {
            let entries = fs::read_dir(dir).map_err(|e| Failure::File(format!("{}: {e}", dir.display())))?;
            let mut paths: Vec<_> = entries
                .filter_map(Result::ok)
                .map(|e| e.path())
                .filter(|p| p.extension().is_some_and(|x| x == "proof"))
                .collect();
            paths.sort();
            for path in paths {
                let text = read(&path)?;
                let name = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                let outcome = declared_logic(&text)
                    .ok_or_else(|| "no `// logic:` line".to_string())
                    .and_then(|n| Logic::axiomatized(n).map_err(|e| e.to_string()))
                    .and_then(|l| {
                        let p = Proof::parse(&text).map_err(|e| e.to_string())?;
                        kernel::check_proof(&l, &p).map(|c| (l, c)).map_err(|e| e.to_string())
                    });
                results.push(match outcome {
                    Ok((l, c)) => {
                        json!({"name": name, "logic": l.name(), "statement": c.to_string(), "ok": true, "error": null})
                    }
                    Err(e) => json!({"name": name, "ok": false, "error": e}),
                });
            }
        }
    }
    let ok = results.iter().all(|r| r["ok"] == true);
    let passed = results.iter().filter(|r| r["ok"] == true).count();
    Ok(Report::new(
        json!({"checked": results.len(), "passed": passed, "proofs": results}),
        if ok { HOLDS } else { FAILS },
    ))
}

/// The separating examples: the logic, the principle it does not prove,
/// and the conditions expected to hold and to fail on the frame.
struct Separation {
    logic: &'static str,
    missing: Principle,
    holding: &'static [Principle],
    text: &'static str,
}

fn separation(example: Example) -> Separation {
    use Principle::*;
    match example {
        Example::J2plus => Separation {
            logic: "IL-(J2,J4+,J5)",
            missing: J2Plus,
            holding: &[J2, J4Plus, J5],
            text: data::J2PLUS_SEPARATION,
        },
        Example::J4plus => Separation {
            logic: "IL-(J1,J4,J5)",
            missing: J4Plus,
            holding: &[J1, J4, J5],
            text: data::J4PLUS_SEPARATION,
        },
    }
}

pub fn reproduce(example: Example, path: Option<&Path>) -> Result<Report, Failure> {
    let sep = separation(example);
    let text = match path {
        Some(p) => read(p)?,
        None => sep.text.to_string(),
    };
    let m = GenModel::from_json(&text, false).map_err(|e| Failure::File(e.to_string()))?;
    let l = logic(sep.logic)?;
    let instance = sep.missing.characteristic_instance();
    let sk = m.frame.skeleton();
    let x = world(sk, "x")?;

    let conds: serde_json::Map<_, _> = sep
        .holding
        .iter()
        .chain([&sep.missing])
        .map(|&p| (p.name().to_string(), Value::from(m.frame.satisfies(p))))
        .collect();
    let conditions_as_expected = sep.holding.iter().all(|&p| m.frame.satisfies(p)) && !m.frame.satisfies(sep.missing);
    let refuted_at_x = !m.eval(x, &instance);
    let search = bounded_refute(&l, &instance, 4);
    let verified = search.as_ref().is_some_and(|r| r.verify(&l, &instance));
    let confirmed = conditions_as_expected && refuted_at_x && verified;
    Ok(Report::new(
        json!({
            "logic": l.name(),
            "principle": sep.missing.name(),
            "instance": instance.to_string(),
            "frame": m.frame.to_json(),
            "conditions": conds,
            "valuation": valuation_to_names(sk, &m.valuation),
            "refuted_at_x": refuted_at_x,
            "search": search.map(|r| r.to_json()),
            "search_verified": verified,
            "confirmed": confirmed,
        }),
        if confirmed { HOLDS } else { FAILS },
    ))
}
