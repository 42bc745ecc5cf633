use std::fmt::Write as _;
use std::path::Path;

use helly_core::harness::{family_fingerprint, HellyReport};
use helly_core::set_family::{mask_elements, SetFamily};
use helly_core::{
    build_family, common_eigen_refinement, common_invariant_via_theorem4, exhaustive_verify_bound,
    extremal_family, find_redundant_union_witness, generate_family, helly_check_eigenvectors,
    helly_check_invariant, lemma_condition_holds, verify_sharpness, Budget, FieldSpec,
    OperatorFamily, Strategy,
};
use serde_json::{json, Value};

use crate::files::{load_family, load_set_family, load_subspaces, FamilyFile};
use crate::report::{
    scalar_json, set_text, span_text, subspace_json, vector_json, vector_text, vectors_json,
    CommandResult, Failure, Output, Status,
};

pub fn parse_field(text: &str) -> Result<FieldSpec, Failure> {
    text.parse::<FieldSpec>()
        .map_err(|e| Failure::input(format!("--field {text}: {e}")))
}

fn one_based(indices: &[usize]) -> Vec<usize> {
    indices.iter().map(|i| i + 1).collect()
}

fn names(fam: &OperatorFamily, indices: &[usize]) -> String {
    let parts: Vec<&str> = indices.iter().map(|&i| fam.name(i)).collect();
    format!("{{{}}}", parts.join(","))
}

pub fn common_eig(path: &Path) -> CommandResult {
    let fam = load_family(path)?;
    let lines = common_eigen_refinement(&fam)?;
    let mut text = String::new();
    if lines.is_empty() {
        text.push_str("none\n");
    }
    let mut out = Vec::new();
    for (i, line) in lines.iter().enumerate() {
        let basis = line.subspace.basis_vectors();
        let values: Vec<String> = line
            .assignment
            .iter()
            .map(|(n, v)| format!("{n} -> {v}"))
            .collect();
        writeln!(
            text,
            "line {}: {}; {}",
            i + 1,
            span_text(&basis),
            values.join(", ")
        )
        .unwrap();
        out.push(json!({
            "dim": line.subspace.dim(),
            "basis": vectors_json(&basis),
            "eigenvalues": line.assignment.iter()
                .map(|(n, v)| json!({"operator": n, "value": scalar_json(v)}))
                .collect::<Vec<_>>(),
        }));
    }
    Ok(Output {
        status: Status::Ok,
        result: json!({
            "field": fam.field().to_string(),
            "dim": fam.dim(),
            "operators": fam.len(),
            "lines": out,
        }),
        text,
    })
}

pub fn verify_sharpness_cmd(d: usize, field: FieldSpec, budget: &Budget) -> CommandResult {
    let fam = build_family(d, field, budget)?;
    let r = verify_sharpness(&fam, budget)?;
    let oracle = match r.oracle_agrees {
        Some(true) => "agrees",
        Some(false) => "disagrees",
        None => "skipped",
    };
    let verified = r.sharp && r.oracle_agrees != Some(false);
    let mut text = format!(
        "d = {d} over {field}: {} operators, {}\n",
        r.operators,
        if r.sharp { "sharp" } else { "not sharp" }
    );
    writeln!(text, "brute-force cross-check: {oracle}").unwrap();
    let mut checks = Vec::new();
    for c in &r.leave_one_out {
        let name = c.left_out.as_deref().unwrap_or("");
        match &c.witness {
            Some(v) => writeln!(
                text,
                "without {name}: common eigenvector {}",
                vector_text(v)
            )
            .unwrap(),
            None => writeln!(text, "without {name}: no common eigenvector").unwrap(),
        }
        checks.push(json!({
            "left_out": name,
            "witness": c.witness.as_deref().map(vector_json),
            "oracle_agrees": c.oracle_agrees,
        }));
    }
    match &r.full_family.witness {
        Some(v) => writeln!(text, "full family: common eigenvector {}", vector_text(v)).unwrap(),
        None => text.push_str("full family: no common eigenvector\n"),
    }
    Ok(Output {
        status: if verified {
            Status::Ok
        } else {
            Status::Refuted
        },
        result: json!({
            "d": d,
            "field": field.to_string(),
            "operators": r.operators,
            "sharp": r.sharp,
            "oracle": oracle,
            "leave_one_out": checks,
            "full_family": {
                "witness": r.full_family.witness.as_deref().map(vector_json),
                "oracle_agrees": r.full_family.oracle_agrees,
            },
            "family": serde_json::to_value(FamilyFile::from_family(&fam)).expect("serializable"),
        }),
        text,
    })
}

fn members_json(fam: &SetFamily) -> Value {
    json!(fam.members())
}

pub fn lemma_verify(q: usize, samples: Option<u64>, seed: u64) -> CommandResult {
    let r = exhaustive_verify_bound(q, samples, seed)?;
    let mut text = format!(
        "{} families of size {} {}checked, ",
        r.families_checked,
        r.family_size,
        if r.exhaustive { "" } else { "sampled and " }
    );
    let status = match &r.counterexample {
        None if r.verified() => {
            text.push_str("all fail condition\n");
            Status::Ok
        }
        _ => {
            let c = r
                .counterexample
                .as_ref()
                .map(members_json)
                .unwrap_or(Value::Null);
            writeln!(
                text,
                "{} satisfy the condition; counterexample {c}",
                r.families_checked - r.families_failing_condition
            )
            .unwrap();
            Status::Contradiction
        }
    };
    Ok(Output {
        status,
        result: json!({
            "q": q,
            "family_size": r.family_size,
            "candidates": r.candidates,
            "families_checked": r.families_checked,
            "families_failing_condition": r.families_failing_condition,
            "exhaustive": r.exhaustive,
            "seed": if r.exhaustive { Value::Null } else { json!(seed) },
            "counterexample": r.counterexample.as_ref().map(members_json),
        }),
        text,
    })
}

pub fn lemma_extremal(q: usize, budget: &Budget) -> CommandResult {
    let fam = extremal_family(q)?;
    let verdict = lemma_condition_holds(&fam, budget)?;
    let mut text = format!("extremal family for q = {q}: {} members\n", fam.len());
    for m in fam.members() {
        writeln!(text, "  {}", set_text(&m)).unwrap();
    }
    writeln!(
        text,
        "condition {}",
        if verdict.holds { "holds" } else { "fails" }
    )
    .unwrap();
    Ok(Output {
        status: if verdict.holds {
            Status::Ok
        } else {
            Status::Contradiction
        },
        result: json!({
            "q": q,
            "size": fam.len(),
            "members": members_json(&fam),
            "condition_holds": verdict.holds,
            "violating": verdict.violating.as_deref().map(one_based),
        }),
        text,
    })
}

pub fn lemma_witness(path: &Path, budget: &Budget) -> CommandResult {
    let fam = load_set_family(path)?;
    let witness = find_redundant_union_witness(&fam, budget)?;
    let members = fam.members();
    let (status, text, w) = match &witness {
        Some(w) => {
            let sets: Vec<String> = w.members.iter().map(|&i| set_text(&members[i])).collect();
            let text = format!(
                "redundant union: members {} = {} with union {}\n",
                set_text(&one_based(&w.members)),
                sets.join(" "),
                set_text(&w.union_elements())
            );
            let w = json!({
                "members": one_based(&w.members),
                "sets": w.members.iter().map(|&i| members[i].clone()).collect::<Vec<_>>(),
                "union": mask_elements(w.union),
            });
            (Status::Ok, text, w)
        }
        None => (
            Status::Refuted,
            format!(
                "no redundant union among {} members of subsets of [{}]\n",
                fam.len(),
                fam.q()
            ),
            Value::Null,
        ),
    };
    Ok(Output {
        status,
        result: json!({"q": fam.q(), "members": fam.len(), "witness": w}),
        text,
    })
}

fn helly_output(fam: &OperatorFamily, r: &HellyReport, what: &str) -> Output {
    let mut text = format!(
        "family {}: {} = {}, {} subset(s) of size {} checked{}{}\n",
        r.family_id,
        if what == "eigenvector" { "k" } else { "l" },
        r.k,
        r.subsets_checked,
        r.subset_size,
        if r.degenerate {
            " (degenerate sweep: only the full family)"
        } else {
            ""
        },
        if r.sweep_skipped {
            " (skipped: the full family already has one)"
        } else {
            ""
        },
    );
    if !r.degenerate && !r.sweep_skipped {
        if r.failures.is_empty() {
            text.push_str("every subset has a common ");
            text.push_str(what);
            text.push('\n');
        } else {
            writeln!(
                text,
                "{} subset(s) without a common {what}:",
                r.failures.len()
            )
            .unwrap();
            for s in &r.failures {
                writeln!(text, "  {}", names(fam, s)).unwrap();
            }
        }
    }
    match &r.full_family {
        Some(b) => writeln!(text, "full family: common {what} {}", span_text(b)).unwrap(),
        None => writeln!(text, "full family: no common {what}").unwrap(),
    }
    let status = if r.contradiction {
        text.push_str("CONTRADICTION: the implication fails at or above the known bound\n");
        Status::Contradiction
    } else if r.implication_fails {
        text.push_str("Helly implication fails\n");
        Status::Refuted
    } else if !r.failures.is_empty() {
        text.push_str("Helly implication holds (vacuously: some subset has none)\n");
        Status::Ok
    } else {
        text.push_str("Helly implication holds\n");
        Status::Ok
    };
    let result = json!({
        "family_id": r.family_id,
        "kind": r.kind.to_string(),
        "k": r.k,
        "subset_size": r.subset_size,
        "subsets_checked": r.subsets_checked as u64,
        "degenerate": r.degenerate,
        "sweep_skipped": r.sweep_skipped,
        "failures": r.failures.iter().map(|s| one_based(s)).collect::<Vec<_>>(),
        "full_family": r.full_family.as_deref().map(vectors_json),
        "implication_holds": !r.implication_fails,
        "contradiction": r.contradiction,
        "contradiction_threshold": r.contradiction_threshold,
        "counterexample": r.counterexample.as_ref().map(|ws| ws.iter().map(|w| json!({
            "subset": one_based(&w.subset),
            "basis": vectors_json(&w.basis),
        })).collect::<Vec<_>>()),
    });
    Output {
        status,
        result,
        text,
    }
}

pub fn helly_eig(path: &Path, k: usize, budget: &Budget) -> CommandResult {
    let fam = load_family(path)?;
    let r = helly_check_eigenvectors(&fam, k, budget)?;
    Ok(helly_output(&fam, &r, "eigenvector"))
}

pub fn helly_inv(path: &Path, l: usize, budget: &Budget) -> CommandResult {
    let fam = load_family(path)?;
    let r = helly_check_invariant(&fam, l, budget)?;
    Ok(helly_output(&fam, &r, "invariant subspace"))
}

pub fn invsub(path: &Path, a0: &str, subspaces: &Path, budget: &Budget) -> CommandResult {
    let fam = load_family(path)?;
    let a0_index = fam
        .index_of(a0)
        .ok_or_else(|| Failure::input(format!("no operator named {a0:?}")))?;
    let subs = load_subspaces(subspaces, &fam, a0_index)?;
    let cert = common_invariant_via_theorem4(&fam, a0_index, &subs, budget)?;
    let basis = cert.subspace.basis_vectors();
    let mut text = format!(
        "common invariant subspace: {} (dim {})\n",
        span_text(&basis),
        cert.subspace.dim()
    );
    let witness_names: Vec<&str> = cert
        .witness_operators
        .iter()
        .map(|&j| fam.name(j))
        .collect();
    writeln!(
        text,
        "redundant union of the supports of {} = {}",
        witness_names.join(", "),
        cert.union
    )
    .unwrap();
    for (j, s) in &cert.supports {
        writeln!(text, "  support of {}: {s}", fam.name(*j)).unwrap();
    }
    Ok(Output {
        status: Status::Ok,
        result: json!({
            "a0": a0,
            "subspace": subspace_json(&cert.subspace),
            "eigenbasis": cert.basis.eigenpairs.iter()
                .map(|(v, e)| json!({"value": scalar_json(v), "vector": vector_json(e)}))
                .collect::<Vec<_>>(),
            "supports": cert.supports.iter()
                .map(|(j, s)| json!({"operator": fam.name(*j), "support": s.indices()}))
                .collect::<Vec<_>>(),
            "witness_operators": witness_names,
            "union": cert.union.indices(),
        }),
        text,
    })
}

pub struct GenArgs<'a> {
    pub strategy: &'a str,
    pub d: usize,
    pub n: usize,
    pub field: FieldSpec,
    pub seed: u64,
    pub output: Option<&'a Path>,
}

pub fn gen(args: GenArgs<'_>) -> CommandResult {
    let strategy: Strategy = args.strategy.parse()?;
    let fam = generate_family(args.d, args.field, args.n, args.seed, strategy)?;
    let file = FamilyFile::from_family(&fam);
    let canonical = file.to_canonical_json();
    let text = match args.output {
        Some(p) => {
            std::fs::write(p, &canonical)
                .map_err(|e| Failure::input(format!("{}: {e}", p.display())))?;
            format!(
                "wrote {} operators ({strategy}, d = {}, {}, seed {}) to {}\n",
                fam.len(),
                args.d,
                args.field,
                args.seed,
                p.display()
            )
        }
        None => canonical,
    };
    Ok(Output {
        status: Status::Ok,
        result: json!({
            "strategy": strategy.as_str(),
            "d": args.d,
            "n": args.n,
            "field": args.field.to_string(),
            "seed": args.seed,
            "family_id": family_fingerprint(&fam),
            "path": args.output.map(|p| p.display().to_string()),
            "family": serde_json::to_value(&file).expect("serializable"),
        }),
        text,
    })
}
