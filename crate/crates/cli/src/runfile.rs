//! The line-oriented run-file format and its executor.
//!
//! ```text
//! descent-run 1                 # versioned header, required
//! RING x, y                     # polynomial ring variables
//! DIVISOR x, y                  # divisor components (infix polynomials)
//! MODULE gens=2                 # module over the ring
//! rel x^2, 0                    # one relation column; entries per generator
//! DATUM level=8                 # optional; defaults to --prec
//! RHO [] [1,2] pole=0           # optional comparison override for a ⊂ b
//! col 1+x                       # its columns, entries per target generator
//! RUN glue                      # glue | roundtrip | cocycle
//! ```
//!
//! Blank lines and `#` comments are ignored. Strata are written as subsets
//! of 1-based component indices; `[]` is the open stratum. All parse errors
//! report the line they occurred on (polynomial errors also carry a byte
//! offset within the expression).


use descent_core::chainring::DivisorSpec;
use descent_core::descent::{datum_from_module, glue, pair_model, verify_roundtrip};
use descent_core::error::CoreError;
use descent_core::groebner::VPoly;
use descent_core::module::PresentedModule;
use descent_core::poly::Polynomial;
use descent_core::ring::PresentedRing;
use descent_core::smith::module_invariants;
use descent_core::strata::Mask;
use descent_core::{FieldDesc, Precision};
use serde_json::{json, Value};

use crate::report::Report;
use crate::{EXIT_INPUT, EXIT_OK, EXIT_PRECISION, EXIT_VERIFICATION};

pub const FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunKind {
    Glue,
    Roundtrip,
    Cocycle,
}

#[derive(Debug)]
pub struct RhoOverride {
    pub line: usize,
    pub a: Mask,
    pub b: Mask,
    pub pole: u32,
    pub cols: Vec<String>,
}

/// A parsed run file, still in source form (polynomials as strings).
#[derive(Debug)]
pub struct RunFile {
    pub vars: Vec<String>,
    pub divisor: Vec<(usize, String)>,
    pub gens: usize,
    pub rels: Vec<(usize, Vec<String>)>,
    pub level: Option<u32>,
    pub rho: Vec<RhoOverride>,
    pub run: RunKind,
}

pub struct InputError {
    pub line: usize,
    pub message: String,
}

impl InputError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        InputError {
            line,
            message: message.into(),
        }
    }
}

fn split_entries(s: &str) -> Vec<String> {
    s.split(',')
        .map(|e| e.trim().to_string())
        .filter(|e| !e.is_empty())
        .collect()
}

fn parse_stratum(tok: &str, line: usize) -> Result<Mask, InputError> {
    let inner = tok
        .strip_prefix('[')
        .and_then(|r| r.strip_suffix(']'))
        .ok_or_else(|| {
            InputError::new(line, format!("stratum `{tok}` must look like [] or [1,2]"))
        })?;
    let mut mask: Mask = 0;
    for part in inner.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let i: u32 = part.parse().map_err(|_| {
            InputError::new(line, format!("bad component index `{part}` in stratum {tok}"))
        })?;
        if i == 0 {
            return Err(InputError::new(line, "component indices are 1-based"));
        }
        mask |= 1 << (i - 1);
    }
    Ok(mask)
}

fn key_value(tok: &str, key: &str, line: usize) -> Result<u32, InputError> {
    tok.strip_prefix(key)
        .and_then(|r| r.strip_prefix('='))
        .and_then(|v| v.parse().ok())
        .ok_or_else(|| InputError::new(line, format!("expected `{key}=<number>`, got `{tok}`")))
}

pub fn parse_run_file(src: &str) -> Result<RunFile, InputError> {
    #[derive(PartialEq)]
    enum Section {
        Start,
        Ring,
        Module,
        Rho,
        Other,
    }
    let mut vars: Option<Vec<String>> = None;
    let mut divisor: Vec<(usize, String)> = Vec::new();
    let mut gens: Option<usize> = None;
    let mut rels: Vec<(usize, Vec<String>)> = Vec::new();
    let mut level: Option<u32> = None;
    let mut rho: Vec<RhoOverride> = Vec::new();
    let mut run: Option<RunKind> = None;
    let mut section = Section::Start;
    let mut header_seen = false;

    for (idx, raw) in src.lines().enumerate() {
        let lineno = idx + 1;
        let line = match raw.find('#') {
            Some(p) => &raw[..p],
            None => raw,
        }
        .trim();
        if line.is_empty() {
            continue;
        }
        if !header_seen {
            let rest = line.strip_prefix("descent-run").ok_or_else(|| {
                InputError::new(lineno, "missing `descent-run <version>` header")
            })?;
            let v: u32 = rest.trim().parse().map_err(|_| {
                InputError::new(lineno, "header version must be a number")
            })?;
            if v != FORMAT_VERSION {
                return Err(InputError::new(
                    lineno,
                    format!("unsupported format version {v} (this build reads {FORMAT_VERSION})"),
                ));
            }
            header_seen = true;
            continue;
        }
        let (keyword, rest) = match line.find(char::is_whitespace) {
            Some(p) => (&line[..p], line[p..].trim()),
            None => (line, ""),
        };
        match keyword {
            "RING" => {
                if vars.is_some() {
                    return Err(InputError::new(lineno, "duplicate RING section"));
                }
                let names: Vec<String> = rest
                    .split(|c: char| c == ',' || c.is_whitespace())
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect();
                if names.is_empty() {
                    return Err(InputError::new(lineno, "RING needs at least one variable"));
                }
                vars = Some(names);
                section = Section::Ring;
            }
            "DIVISOR" => {
                if !divisor.is_empty() {
                    return Err(InputError::new(lineno, "duplicate DIVISOR section"));
                }
                for e in split_entries(rest) {
                    divisor.push((lineno, e));
                }
                if divisor.is_empty() {
                    return Err(InputError::new(lineno, "DIVISOR needs at least one component"));
                }
                section = Section::Other;
            }
            "MODULE" => {
                if gens.is_some() {
                    return Err(InputError::new(lineno, "duplicate MODULE section"));
                }
                gens = Some(key_value(rest, "gens", lineno)? as usize);
                section = Section::Module;
            }
            "DATUM" => {
                level = Some(key_value(rest, "level", lineno)?);
                section = Section::Other;
            }
            "RHO" => {
                let toks: Vec<&str> = rest.split_whitespace().collect();
                if toks.len() < 2 {
                    return Err(InputError::new(
                        lineno,
                        "RHO needs two strata, e.g. `RHO [] [1]`",
                    ));
                }
                let a = parse_stratum(toks[0], lineno)?;
                let b = parse_stratum(toks[1], lineno)?;
                let pole = match toks.get(2) {
                    Some(t) => key_value(t, "pole", lineno)?,
                    None => 0,
                };
                rho.push(RhoOverride {
                    line: lineno,
                    a,
                    b,
                    pole,
                    cols: Vec::new(),
                });
                section = Section::Rho;
            }
            "RUN" => {
                run = Some(match rest {
                    "glue" => RunKind::Glue,
                    "roundtrip" => RunKind::Roundtrip,
                    "cocycle" => RunKind::Cocycle,
                    other => {
                        return Err(InputError::new(
                            lineno,
                            format!("unknown run directive `{other}` (glue, roundtrip, cocycle)"),
                        ))
                    }
                });
                section = Section::Other;
            }
            "rel" => {
                if section != Section::Module {
                    return Err(InputError::new(lineno, "`rel` belongs inside MODULE"));
                }
                rels.push((lineno, split_entries(rest)));
            }
            "col" => {
                if section != Section::Rho {
                    return Err(InputError::new(lineno, "`col` belongs inside RHO"));
                }
                rho.last_mut()
                    .expect("in RHO section")
                    .cols
                    .push(rest.to_string());
            }
            other => {
                return Err(InputError::new(
                    lineno,
                    format!("unknown keyword `{other}`"),
                ));
            }
        }
    }
    if !header_seen {
        return Err(InputError::new(1, "missing `descent-run <version>` header"));
    }
    let vars = vars.ok_or_else(|| InputError::new(1, "missing RING section"))?;
    if divisor.is_empty() {
        return Err(InputError::new(1, "missing DIVISOR section"));
    }
    let gens = gens.ok_or_else(|| InputError::new(1, "missing MODULE section"))?;
    let run = run.ok_or_else(|| InputError::new(1, "missing RUN directive"))?;
    Ok(RunFile {
        vars,
        divisor,
        gens,
        rels,
        level,
        rho,
        run,
    })
}

/// Exit code for a core error, per the contract: 1 for mathematical
/// verification failures, 3 for precision/stabilization exhaustion, 2 for
/// everything malformed.
pub fn error_exit_code(e: &CoreError) -> u8 {
    match e {
        CoreError::CocycleInvalid(..) => EXIT_VERIFICATION,
        CoreError::PrecisionExhausted(_) | CoreError::NoStabilization { .. } => EXIT_PRECISION,
        _ => EXIT_INPUT,
    }
}

fn display_column(ring: &PresentedRing, v: &VPoly) -> String {
    let entries: Vec<String> = (0..v.ncomps)
        .map(|c| ring.display_poly(&v.component(c)))
        .collect();
    format!("({})", entries.join(", "))
}

fn module_value(m: &PresentedModule) -> Value {
    json!({
        "ring": m.ring.describe(),
        "generators": m.gens,
        "relations": m.relations.iter().map(|c| display_column(&m.ring, c)).collect::<Vec<_>>(),
    })
}

fn describe_module(rep: &mut Report, m: &PresentedModule) {
    rep.note(format!("glued module over {}", m.ring.describe()));
    rep.note(format!("  generators: {}", m.gens));
    if m.relations.is_empty() {
        rep.note("  relations: none (free)");
    } else {
        for c in &m.relations {
            rep.note(format!("  relation: {}", display_column(&m.ring, c)));
        }
    }
    rep.silent_field("module", module_value(m));
    if let Ok(inv) = module_invariants(m) {
        let var = m.ring.vars()[0].clone();
        let factors: Vec<String> = inv
            .invariant_factors
            .iter()
            .map(|f| f.display(&var))
            .collect();
        rep.field(
            "free_rank",
            json!(inv.free_rank),
            format!("free rank: {}", inv.free_rank),
        );
        rep.field(
            "invariant_factors",
            json!(factors),
            format!("invariant factors: {}", factors.join(", ")),
        );
    }
}

/// Execute a parsed run file. Returns the exit code; all output goes through
/// the report.
pub fn execute(
    rf: &RunFile,
    field: FieldDesc,
    prec: Precision,
    rep: &mut Report,
) -> Result<u8, InputError> {
    let var_refs: Vec<&str> = rf.vars.iter().map(|s| s.as_str()).collect();
    let ring = PresentedRing::polynomial(field, &var_refs);
    let parse_at = |line: usize, src: &str| -> Result<Polynomial, InputError> {
        ring.parse(src)
            .map_err(|e| InputError::new(line, format!("{e}")))
    };

    let mut comps = Vec::new();
    for (line, src) in &rf.divisor {
        comps.push(parse_at(*line, src)?);
    }
    let divisor = DivisorSpec::new(ring.clone(), comps)
        .map_err(|e| InputError::new(rf.divisor[0].0, format!("{e}")))?;
    rep.field(
        "ring",
        json!(ring.describe()),
        format!("ring: {}", ring.describe()),
    );
    rep.field(
        "divisor",
        json!(rf
            .divisor
            .iter()
            .map(|(_, s)| s.clone())
            .collect::<Vec<_>>()),
        format!(
            "divisor: V({})",
            rf.divisor
                .iter()
                .map(|(_, s)| s.clone())
                .collect::<Vec<_>>()
                .join(" * ")
        ),
    );

    let mut rel_cols = Vec::new();
    for (line, entries) in &rf.rels {
        if entries.len() != rf.gens {
            return Err(InputError::new(
                *line,
                format!(
                    "relation has {} entries but the module has {} generators",
                    entries.len(),
                    rf.gens
                ),
            ));
        }
        let mut parts = Vec::new();
        for e in entries {
            parts.push(parse_at(*line, e)?);
        }
        rel_cols.push(VPoly::from_components(&parts));
    }
    let module = PresentedModule::new(ring.clone(), rf.gens, rel_cols)
        .map_err(|e| InputError::new(1, format!("{e}")))?;
    rep.field(
        "module_generators",
        json!(rf.gens),
        format!(
            "module: {} generator(s), {} relation(s)",
            rf.gens,
            rf.rels.len()
        ),
    );

    let level = rf.level.unwrap_or(prec.level);
    if level < 2 {
        return Err(InputError::new(1, "datum level must be at least 2"));
    }
    let run_prec = Precision::new(level, prec.cap.max(level));
    rep.field("level", json!(level), format!("level: {level}"));

    // canonical datum from the module, then explicit comparison overrides
    let mut datum = match datum_from_module(&module, &divisor, level) {
        Ok(d) => d,
        Err(e) => return Err(InputError::new(1, format!("{e}"))),
    };
    for o in &rf.rho {
        let n = divisor.n();
        if o.a >= (1 << n) || o.b >= (1 << n) || !datum.comparisons.contains_key(&(o.a, o.b)) {
            return Err(InputError::new(
                o.line,
                "RHO strata must form a strict inclusion of divisor subsets",
            ));
        }
        let model = pair_model(&divisor, o.a, o.b, level)
            .map_err(|e| InputError::new(o.line, format!("{e}")))?;
        if o.cols.len() != rf.gens {
            return Err(InputError::new(
                o.line,
                format!(
                    "RHO needs one `col` per generator ({} expected, {} given)",
                    rf.gens,
                    o.cols.len()
                ),
            ));
        }
        let mut cols = Vec::new();
        for src in &o.cols {
            let entries = split_entries(src);
            if entries.len() != rf.gens {
                return Err(InputError::new(
                    o.line,
                    format!(
                        "each `col` needs {} comma-separated entries, got {}",
                        rf.gens,
                        entries.len()
                    ),
                ));
            }
            let mut parts = Vec::new();
            for e in &entries {
                let p = model
                    .ring
                    .parse(e)
                    .map_err(|err| InputError::new(o.line, format!("{err}")))?;
                parts.push(p);
            }
            cols.push(VPoly::from_components(&parts));
        }
        let mut matrix = model.matrix_from_cols(rf.gens, cols);
        for p in matrix.poles.iter_mut() {
            *p = o.pole;
        }
        datum.comparisons.insert((o.a, o.b), matrix);
        datum.canonical = false;
    }
    if !rf.rho.is_empty() {
        rep.note(format!(
            "comparisons: {} override(s) applied",
            rf.rho.len()
        ));
    }

    let code = match rf.run {
        RunKind::Cocycle => {
            let cc = datum
                .refresh_cocycle_status()
                .map_err(|e| InputError::new(1, format!("{e}")))?;
            rep.field(
                "triples_checked",
                json!(cc.triples_checked),
                format!("triples checked: {}", cc.triples_checked),
            );
            match cc.witness {
                None => {
                    rep.field("cocycle", json!("ok"), "cocycle: ok");
                    EXIT_OK
                }
                Some((a, b, c)) => {
                    rep.field(
                        "cocycle",
                        json!({"violated_on": [a.clone(), b.clone(), c.clone()]}),
                        format!("cocycle: violated on ({a}, {b}, {c})"),
                    );
                    EXIT_VERIFICATION
                }
            }
        }
        RunKind::Glue => match glue(&datum, run_prec) {
            Ok(g) => {
                for v in &g.verdicts {
                    rep.note(format!(
                        "  [{}] {}: {}",
                        if v.ok { "ok" } else { "FAIL" },
                        v.stratum,
                        v.detail
                    ));
                }
                rep.silent_field(
                    "verdicts",
                    json!(g
                        .verdicts
                        .iter()
                        .map(|v| json!({"stratum": v.stratum, "ok": v.ok, "detail": v.detail}))
                        .collect::<Vec<_>>()),
                );
                rep.field(
                    "pole_bound",
                    json!(g.pole_bound),
                    format!(
                        "pole bound: {} ({} escalation(s))",
                        g.pole_bound, g.escalations
                    ),
                );
                for (stratum, lvl) in &g.stabilization {
                    rep.note(format!("stabilized: {stratum} at level {lvl}"));
                }
                rep.silent_field(
                    "stabilization",
                    json!(g
                        .stabilization
                        .iter()
                        .map(|(s, l)| json!({"stratum": s, "level": l}))
                        .collect::<Vec<_>>()),
                );
                if let Some(m) = &g.module {
                    describe_module(rep, m);
                }
                rep.field("result", json!("verified"), "result: verified");
                EXIT_OK
            }
            Err(CoreError::CocycleInvalid(a, b, c)) => {
                rep.field(
                    "cocycle",
                    json!({"violated_on": [a.clone(), b.clone(), c.clone()]}),
                    format!("cocycle: violated on ({a}, {b}, {c})"),
                );
                EXIT_VERIFICATION
            }
            Err(e) => {
                let code = error_exit_code(&e);
                rep.field("error", json!(format!("{e}")), format!("error: {e}"));
                code
            }
        },
        RunKind::Roundtrip => match verify_roundtrip(&module, &divisor, run_prec) {
            Ok(rt) => {
                rep.field(
                    "level_used",
                    json!(rt.level_used),
                    format!("level used: {}", rt.level_used),
                );
                rep.field("iso", json!(rt.iso), format!("roundtrip iso: {}", rt.iso));
                if let Some(sm) = rt.invariants_match {
                    rep.field(
                        "invariants_match",
                        json!(sm),
                        format!("invariant factors match: {sm}"),
                    );
                }
                if let Some(m) = &rt.report.module {
                    describe_module(rep, m);
                }
                if rt.iso {
                    EXIT_OK
                } else {
                    EXIT_VERIFICATION
                }
            }
            Err(CoreError::CocycleInvalid(a, b, c)) => {
                rep.field(
                    "cocycle",
                    json!({"violated_on": [a.clone(), b.clone(), c.clone()]}),
                    format!("cocycle: violated on ({a}, {b}, {c})"),
                );
                EXIT_VERIFICATION
            }
            Err(e) => {
                let code = error_exit_code(&e);
                rep.field("error", json!(format!("{e}")), format!("error: {e}"));
                code
            }
        },
    };
    Ok(code)
}
