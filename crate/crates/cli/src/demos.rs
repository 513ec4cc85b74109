//! Built-in demonstrations: the affine-line example, the coordinate-cross
//! example, the nerve census, and the one-component exactness check.

use descent_core::blseq::check_bl_sequence;
use descent_core::chainring::DivisorSpec;
use descent_core::descent::{open_stratum_localization, pair_model, stratum_tower, verify_roundtrip};
use descent_core::groebner::VPoly;
use descent_core::module::PresentedModule;
use descent_core::ring::PresentedRing;
use descent_core::strata::{mask_label, nerve_counts, subsets};
use descent_core::{FieldDesc, Precision};
use serde_json::json;

use crate::report::Report;
use crate::runfile::error_exit_code;
use crate::{EXIT_INPUT, EXIT_OK, EXIT_VERIFICATION};

pub struct DemoConfig {
    pub prec: Precision,
    pub deg: u32,
    pub seed: u64,
    pub field: FieldDesc,
}

pub fn run_demo(name: &str, cfg: &DemoConfig, rep: &mut Report) -> u8 {
    match name {
        "a1" => demo_a1(cfg, rep),
        "a2-crossing" => demo_a2(cfg, rep),
        "nerve-census" => demo_nerve(rep),
        "bl-sequence" => demo_bl(cfg, rep),
        other => {
            rep.field(
                "error",
                json!(format!("unknown demo `{other}`")),
                format!(
                    "unknown demo `{other}`; available: a1, a2-crossing, nerve-census, bl-sequence"
                ),
            );
            EXIT_INPUT
        }
    }
}

fn roundtrip_line(
    rep: &mut Report,
    label: &str,
    m: &PresentedModule,
    divisor: &DivisorSpec,
    prec: Precision,
    results: &mut Vec<serde_json::Value>,
) -> bool {
    match verify_roundtrip(m, divisor, prec) {
        Ok(rt) => {
            let ok = rt.iso && rt.invariants_match != Some(false);
            let mut extra = String::new();
            if let Some(sm) = rt.invariants_match {
                extra = format!(", invariant factors match: {sm}");
            }
            rep.note(format!(
                "  [{}] {label}: iso={} (level {}{extra})",
                if ok { "ok" } else { "FAIL" },
                rt.iso,
                rt.level_used
            ));
            results.push(json!({
                "module": label,
                "iso": rt.iso,
                "level": rt.level_used,
                "invariants_match": rt.invariants_match,
            }));
            ok
        }
        Err(e) => {
            rep.note(format!("  [FAIL] {label}: {e}"));
            results.push(json!({ "module": label, "error": format!("{e}") }));
            false
        }
    }
}

/// The affine line with the divisor at the origin: list the three rings the
/// construction produces, then round-trip a small fixed module suite.
fn demo_a1(cfg: &DemoConfig, rep: &mut Report) -> u8 {
    let r = PresentedRing::polynomial(FieldDesc::Rationals, &["x"]);
    let f = r.parse("x").expect("fixed polynomial");
    let divisor = match DivisorSpec::new(r.clone(), vec![f]) {
        Ok(d) => d,
        Err(e) => {
            rep.note(format!("error: {e}"));
            return error_exit_code(&e);
        }
    };
    let level = cfg.prec.level.max(2);
    rep.field(
        "setting",
        json!("X = A^1 over Q, D = V(x)"),
        "X = A^1 over Q, D = V(x)",
    );

    let open = open_stratum_localization(&divisor).expect("localization at x");
    rep.field(
        "open_ring",
        json!(open.ring.describe()),
        format!("R_Y = k[x,1/x]  [presented as {}]", open.ring.describe()),
    );
    let tower = stratum_tower(&divisor, 1, level).expect("tower along x");
    rep.field(
        "tower_ring",
        json!(tower.level(level).describe()),
        format!(
            "R_Y^ at level {level} = k[x]/(x^{level})  [presented as {}]",
            tower.level(level).describe()
        ),
    );
    let model = pair_model(&divisor, 0, 1, level).expect("chain model");
    rep.field(
        "chain_ring",
        json!(model.ring.describe()),
        format!(
            "R_Y^[1/x] chain model = truncated Laurent with {level} digits  [body ring {}]",
            model.ring.describe()
        ),
    );

    rep.note("roundtrip suite:");
    let mut results = Vec::new();
    let mut all_ok = true;
    let free = PresentedModule::free(r.clone(), 1);
    all_ok &= roundtrip_line(rep, "free rank 1", &free, &divisor, cfg.prec, &mut results);
    let x2 = r.parse("x^2").expect("fixed polynomial");
    let tors = PresentedModule::cyclic(r.clone(), &[x2]).expect("cyclic module");
    all_ok &= roundtrip_line(rep, "k[x]/(x^2)", &tors, &divisor, cfg.prec, &mut results);
    let x3 = r.parse("x^3").expect("fixed polynomial");
    let mixed = PresentedModule::new(r.clone(), 2, vec![VPoly::from_poly(2, 1, &x3)])
        .expect("presentation");
    all_ok &= roundtrip_line(
        rep,
        "k[x] + k[x]/(x^3)",
        &mixed,
        &divisor,
        cfg.prec,
        &mut results,
    );
    rep.silent_field("roundtrips", json!(results));
    rep.field(
        "all_ok",
        json!(all_ok),
        if all_ok {
            "all verdicts pass"
        } else {
            "some verdicts FAILED"
        },
    );
    if all_ok {
        EXIT_OK
    } else {
        EXIT_VERIFICATION
    }
}

/// The coordinate cross in the plane: four strata, then round trips across
/// both components.
fn demo_a2(cfg: &DemoConfig, rep: &mut Report) -> u8 {
    let r = PresentedRing::polynomial(FieldDesc::Rationals, &["x", "y"]);
    let fx = r.parse("x").expect("fixed polynomial");
    let fy = r.parse("y").expect("fixed polynomial");
    let divisor = match DivisorSpec::new(r.clone(), vec![fx, fy]) {
        Ok(d) => d,
        Err(e) => {
            rep.note(format!("error: {e}"));
            return error_exit_code(&e);
        }
    };
    // the two-component search space grows quickly with the level; stay small
    let level = cfg.prec.level.clamp(2, 4);
    let prec = Precision::new(level, cfg.prec.cap.min(16).max(level));
    rep.field(
        "setting",
        json!("X = A^2 over Q, D = V(x*y)"),
        "X = A^2 over Q, D = V(x*y)",
    );
    let mut stratum_lines = Vec::new();
    for mask in subsets(2) {
        let label = mask_label(mask, 2);
        let desc = if mask == 0 {
            open_stratum_localization(&divisor)
                .expect("localization")
                .ring
                .describe()
        } else {
            stratum_tower(&divisor, mask, level)
                .expect("tower")
                .level(level)
                .describe()
        };
        rep.note(format!("  {label}: {desc}"));
        stratum_lines.push(json!({"stratum": label, "ring": desc}));
    }
    rep.silent_field("strata", json!(stratum_lines));

    rep.note(format!("roundtrip suite at level {level}:"));
    let mut results = Vec::new();
    let mut all_ok = true;
    let free = PresentedModule::free(r.clone(), 1);
    all_ok &= roundtrip_line(rep, "free rank 1", &free, &divisor, prec, &mut results);
    let x = r.parse("x").expect("fixed polynomial");
    let tors = PresentedModule::cyclic(r.clone(), &[x]).expect("cyclic module");
    all_ok &= roundtrip_line(rep, "k[x,y]/(x)", &tors, &divisor, prec, &mut results);
    rep.silent_field("roundtrips", json!(results));
    rep.field(
        "all_ok",
        json!(all_ok),
        if all_ok {
            "all verdicts pass"
        } else {
            "some verdicts FAILED"
        },
    );
    if all_ok {
        EXIT_OK
    } else {
        EXIT_VERIFICATION
    }
}

/// Chain counts of the stratum poset nerve for n ≤ 4.
fn demo_nerve(rep: &mut Report) -> u8 {
    rep.note("chains of length 1, 2, 3 in the stratum poset:");
    let mut rows = Vec::new();
    for n in 1..=4u32 {
        let counts = nerve_counts(n, 3);
        let shown: Vec<String> = counts.iter().map(|c| c.to_string()).collect();
        rep.note(format!("n={n}: {}", shown.join(" ")));
        rows.push(json!({"n": n, "counts": counts}));
    }
    rep.silent_field("census", json!(rows));
    EXIT_OK
}

/// Exactness of 0 → R → R_f ⊕ R^ → R^_f → 0 at the configured precision.
fn demo_bl(cfg: &DemoConfig, rep: &mut Report) -> u8 {
    let r = PresentedRing::polynomial(cfg.field, &["x"]);
    let f = r.parse("x").expect("fixed polynomial");
    match check_bl_sequence(&r, &f, cfg.prec.level, cfg.deg, 20, cfg.seed) {
        Ok(report) => {
            for l in report.lines() {
                rep.note(l);
            }
            rep.silent_field("precision", json!(report.precision));
            rep.silent_field("exact", json!(report.exact));
            if report.exact {
                EXIT_OK
            } else {
                EXIT_VERIFICATION
            }
        }
        Err(e) => {
            rep.note(format!("error: {e}"));
            error_exit_code(&e)
        }
    }
}
