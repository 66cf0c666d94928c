//! The acceptance criteria, run in order with one PASS/FAIL line each.
//!
//! This target has no test harness: `cargo test --test acceptance` always
//! prints the report, and exits non-zero when any criterion fails.

use ilbench_core::correspondence::{correspondence_audit, veltman_sweep, FrameConditions};
use ilbench_core::data;
use ilbench_core::decide::{
    audit, bounded_refute, canonical_model, decide, enumerate_kl, Construction, ExactOracle, Mode, Verdict,
};
use ilbench_core::genveltman::{embed_veltman, GenModel};
use ilbench_core::kernel::{check_proof, is_tautology, theorem_library, FrameClass, Logic, Principle, Scheme};
use ilbench_core::random::{
    close_gen, close_veltman, random_formula, random_gen_frame, random_valuation, random_veltman_frame,
    random_veltman_model,
};
use ilbench_core::semantics::DEFAULT_VALUATION_BITS;
use ilbench_core::syntax::{adequate_closure, parse, Formula};
use ilbench_core::veltman::VeltmanModel;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::process::ExitCode;
use std::time::{Duration, Instant};

type Outcome = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(t: Instant, limit: Duration) -> Result<(), String> {
    ensure(t.elapsed() < limit, || format!("took {:.1?}, over the {limit:?} limit", t.elapsed()))
}

fn logic(name: &str) -> Logic {
    Logic::by_name(name).expect("registered logic")
}

/// One separating example: the shipped model, the conditions that must
/// hold and fail on it, and a search in the logic for a small refutation.
fn separation(text: &str, logic_name: &str, holding: &[Principle], missing: Principle, instance: &str) -> Outcome {
    let t = Instant::now();
    let m = GenModel::from_json(text, false).map_err(|e| e.to_string())?;
    for &p in holding {
        ensure(m.frame.satisfies(p), || format!("{p} condition fails: {:?}", m.frame.violation(p)))?;
    }
    ensure(!m.frame.satisfies(missing), || format!("{missing} condition holds"))?;
    let a = parse(instance).unwrap();
    ensure(a == missing.characteristic_instance(), || format!("{a} is not the {missing} instance"))?;
    let x = m.frame.skeleton().index_of("x").map_err(|e| e.to_string())?;
    ensure(!m.eval(x, &a), || format!("{a} holds at x"))?;
    let l = logic(logic_name);
    let r = bounded_refute(&l, &a, 4).ok_or_else(|| format!("no countermodel for {a} in {l} within 4 worlds"))?;
    ensure(r.verify(&l, &a) && r.model.len() <= 4, || "countermodel does not check".into())?;
    within(t, Duration::from_secs(10))?;
    Ok(format!(
        "{} hold, {missing} fails, x ⊮ {a}; {}-world countermodel in {l}; {:.2?}",
        holding.iter().map(|p| p.name()).collect::<Vec<_>>().join(", "),
        r.model.len(),
        t.elapsed()
    ))
}

fn first_example() -> Outcome {
    separation(
        data::J2PLUS_SEPARATION,
        "IL-(J2,J4+,J5)",
        &[Principle::J2, Principle::J4Plus, Principle::J5],
        Principle::J2Plus,
        "(p |> q | r) & (q |> r) -> p |> r",
    )
}

fn second_example() -> Outcome {
    separation(
        data::J4PLUS_SEPARATION,
        "IL-(J1,J4,J5)",
        &[Principle::J1, Principle::J4, Principle::J5],
        Principle::J4Plus,
        "[](q -> r) -> p |> q -> p |> r",
    )
}

fn correspondence() -> Outcome {
    let t = Instant::now();
    let veltman = [Principle::J1, Principle::J4, Principle::J2, Principle::J5];
    let mut frames = 0;
    for n in 1..=4 {
        let (count, bad) = veltman_sweep(n)
            .map(|f| {
                let bad =
                    veltman.iter().find(|&&p| !correspondence_audit(&f, p, DEFAULT_VALUATION_BITS).unwrap().agrees());
                (1usize, bad.map(|p| format!("{p} on {}", f.to_json())))
            })
            .reduce(|| (0, None), |a, b| (a.0 + b.0, a.1.or(b.1)));
        if let Some(b) = bad {
            return Err(format!("Veltman disagreement: {b}"));
        }
        frames += count;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let gens: Vec<_> = (0..600)
        .map(|_| {
            let n = rng.gen_range(1..=4);
            random_gen_frame(&mut rng, n)
        })
        .collect();
    let bad = gens.par_iter().find_map_any(|f| {
        Principle::ALL
            .into_iter()
            .find(|&p| !correspondence_audit(f, p, DEFAULT_VALUATION_BITS).unwrap().agrees())
            .map(|p| format!("{p} on {}", f.to_json()))
    });
    if let Some(b) = bad {
        return Err(format!("generalized disagreement: {b}"));
    }
    within(t, Duration::from_secs(300))?;
    Ok(format!(
        "{frames} Veltman frames (every local configuration up to 4 worlds) × 4 conditions, {} random generalized frames × 6 conditions, no disagreement; {:.1?}",
        gens.len(),
        t.elapsed()
    ))
}

/// Random instances of every axiom of `l`, and of `J6`, at every world.
fn axioms_hold(
    l: &Logic,
    eval: &dyn Fn(usize, &Formula) -> bool,
    worlds: usize,
    rng: &mut ChaCha8Rng,
) -> Result<usize, String> {
    let vars = ["p", "q", "r"];
    let mut checked = 0;
    for &s in l.axioms() {
        let inst = if s == Scheme::G1 {
            // A random tautology, modal subformulas counting as atoms.
            (0..1000)
                .map(|_| random_formula(rng, &vars, 3))
                .find(is_tautology)
                .unwrap_or(Formula::imp(Formula::Bot, Formula::Bot))
        } else {
            let args: Vec<Formula> = (0..s.metavariables().len()).map(|_| random_formula(rng, &vars, 2)).collect();
            s.instance(&args).expect("one argument per metavariable")
        };
        if let Some(w) = (0..worlds).find(|&w| !eval(w, &inst)) {
            return Err(format!("{s} instance {inst} fails at world {w}"));
        }
        checked += 1;
    }
    let a = random_formula(rng, &vars, 3);
    let lhs = Formula::boxed(a.clone());
    let rhs = Formula::rhd(Formula::not(a.clone()), Formula::Bot);
    if let Some(w) = (0..worlds).find(|&w| eval(w, &lhs) != eval(w, &rhs)) {
        return Err(format!("□A ⟺ (¬A)▷⊥ fails for A = {a} at world {w}"));
    }
    Ok(checked)
}

fn soundness() -> Outcome {
    let t = Instant::now();
    let registry = Logic::registry();
    let per_class = |class: FrameClass| -> Result<usize, String> {
        (0..1000u64)
            .into_par_iter()
            .map(|i| {
                let mut rng = ChaCha8Rng::seed_from_u64(i ^ (class as u64) << 32);
                let n = rng.gen_range(1..=4);
                let mut checked = 0;
                let base_v = random_veltman_frame(&mut rng, n);
                let base_g = random_gen_frame(&mut rng, n);
                for l in &registry {
                    let valuation = random_valuation(&mut rng, n, &["p", "q", "r"]);
                    checked += match class {
                        FrameClass::Veltman => {
                            let m = VeltmanModel { frame: close_veltman(&base_v, l), valuation };
                            ensure(m.frame.is_frame_for(l), || format!("closed frame is not a {l} frame"))?;
                            axioms_hold(l, &|w, f| m.eval(w, f), n, &mut rng)
                                .map_err(|e| format!("{l}: {e} in {}", m.to_json()))?
                        }
                        FrameClass::Generalized => {
                            let m = GenModel { frame: close_gen(&base_g, l), valuation };
                            ensure(m.frame.is_frame_for(l), || format!("closed frame is not a {l} frame"))?;
                            axioms_hold(l, &|w, f| m.eval(w, f), n, &mut rng)
                                .map_err(|e| format!("{l}: {e} in {}", m.to_json()))?
                        }
                    };
                }
                Ok(checked)
            })
            .try_reduce(|| 0, |a, b| Ok(a + b))
    };
    let v = per_class(FrameClass::Veltman)?;
    let g = per_class(FrameClass::Generalized)?;
    Ok(format!(
        "1000 models per class × 20 logics: {v} Veltman and {g} generalized axiom instances valid, J6 identity pointwise on all; {:.1?}",
        t.elapsed()
    ))
}

fn proof_library() -> Outcome {
    let lib = theorem_library();
    ensure(lib.len() >= 13, || format!("only {} derivations", lib.len()))?;
    for e in &lib {
        let c = check_proof(&e.logic, &e.proof).map_err(|err| format!("{}: {err}", e.name))?;
        ensure(c == e.statement, || format!("{} concludes {c}", e.name))?;
    }
    Ok(format!("{} derivations check", lib.len()))
}

fn embedding() -> Outcome {
    let t = Instant::now();
    let vars = ["p", "q", "r"];
    let bad = (0..500u64).into_par_iter().find_map_any(|i| {
        let mut rng = ChaCha8Rng::seed_from_u64(7000 + i);
        let n = rng.gen_range(1..=5);
        let m = random_veltman_model(&mut rng, n, &vars);
        let g = embed_veltman(&m);
        (0..50).find_map(|_| {
            let f = random_formula(&mut rng, &vars, 4);
            (m.extension(&f) != g.extension(&f)).then(|| format!("{f} on {}", m.to_json()))
        })
    });
    match bad {
        Some(b) => Err(format!("disagreement: {b}")),
        None => Ok(format!("500 models × 50 formulas agree at every world; {:.1?}", t.elapsed())),
    }
}

fn decidability() -> Outcome {
    let t = Instant::now();
    let (il_minus, j1) = (logic("IL-"), logic("IL-(J1)"));
    let pp = parse("p |> p").unwrap();
    match decide(&il_minus, &pp, Mode::Practical(2)).map_err(|e| e.to_string())? {
        Verdict::NonTheorem(r) if r.model.len() <= 2 && r.verify(&il_minus, &pp) => {}
        other => return Err(format!("IL- on p |> p: {other:?}")),
    }
    match decide(&j1, &pp, Mode::Exact).map_err(|e| e.to_string())? {
        Verdict::Theorem => {}
        other => return Err(format!("IL-(J1) on p |> p in exact mode: {other:?}")),
    }
    let dp = parse("<>p |> p").unwrap();
    match decide(&il_minus, &dp, Mode::Exact).map_err(|e| e.to_string())? {
        Verdict::NonTheorem(r) if r.verify(&il_minus, &dp) => {}
        other => return Err(format!("IL- on <>p |> p: {other:?}")),
    }
    let edges: Vec<_> =
        [FrameClass::Veltman, FrameClass::Generalized].into_iter().flat_map(Logic::hasse_edges).collect();
    let sizes = edges
        .par_iter()
        .map(|(small, large, p)| {
            let a = p.characteristic_instance();
            let r = bounded_refute(small, &a, 5).ok_or_else(|| format!("{small} ⊂ {large}: no countermodel to {p}"))?;
            ensure(r.verify(small, &a), || format!("{small} ⊂ {large}: countermodel fails to check"))?;
            Ok(r.model.len())
        })
        .collect::<Result<Vec<_>, String>>()?;
    within(t, Duration::from_secs(600))?;
    Ok(format!(
        "p▷p refuted in 2 worlds, proved with J1, ◊p▷p refuted; {} edges separated by countermodels of at most {} worlds; {:.1?}",
        edges.len(),
        sizes.iter().max().unwrap_or(&0),
        t.elapsed()
    ))
}

fn canonical_audits() -> Outcome {
    let t = Instant::now();
    let ctx = adequate_closure(&[parse("p").unwrap()]);
    let required = [
        ("IL-", Construction::VeltmanTagged),
        ("IL-(J1)", Construction::VeltmanTagged),
        ("IL-(J5)", Construction::VeltmanTagged),
        ("IL", Construction::VeltmanSequenced),
        ("IL-(J4)", Construction::GenTagged),
        ("IL-(J2,J5)", Construction::GenSequenced),
    ];
    for (name, c) in required {
        ensure(Construction::for_logic(&logic(name)) == c, || format!("{name} does not use {c}"))?;
    }
    let mut models = 0;
    for l in Logic::registry() {
        let kl = enumerate_kl(&l, &ctx, &ExactOracle::default()).map_err(|e| format!("{l}: {e}"))?;
        kl.audit_prec_lemmas().map_err(|e| format!("{l}: {e}"))?;
        for a in ctx.formulas() {
            if kl.sets().iter().all(|s| s.contains(a)) {
                continue;
            }
            let m = canonical_model(&kl, a).map_err(|e| format!("{l}, {a}: {e}"))?;
            ensure(m.model.is_frame_for(&l), || format!("{l}, {a}: frame conditions fail"))?;
            audit(&kl, &m).map_err(|e| format!("{l}, {a}: {e}"))?;
            ensure(!m.model.eval(m.root, a), || format!("{l}, {a}: root satisfies the target"))?;
            models += 1;
        }
    }
    Ok(format!(
        "all 20 logics at the closure of {{p}} ({} formulas): ≺ lemmas hold, {models} canonical models pass frame and truth-lemma audits; {:.1?}",
        ctx.len(),
        t.elapsed()
    ))
}

fn main() -> ExitCode {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("first separating example (j2plus_separation.json)", first_example),
        ("second separating example (j4plus_separation.json)", second_example),
        ("correspondence suite", correspondence),
        ("soundness fuzzing", soundness),
        ("proof library", proof_library),
        ("embedding agreement", embedding),
        ("decidability demos", decidability),
        ("canonical-model audits", canonical_audits),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let outcome = catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|p| {
            let msg = p.downcast_ref::<String>().cloned().or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()));
            Err(format!("panicked: {}", msg.unwrap_or_default()))
        });
        match outcome {
            Ok(detail) => println!("PASS {}. {name}: {detail}", i + 1),
            Err(reason) => {
                failed += 1;
                println!("FAIL {}. {name}: {reason}", i + 1);
            }
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
