//! Command-line front end: analysis, derivatives, tensor decomposition,
//! enumeration, and diagram rendering, as text or JSON.
//!
//! Exit codes: 0 on success, 2 on input errors, 3 on I/O errors. Every JSON
//! payload is a single schema-versioned object and is byte-deterministic
//! for a fixed invocation.

use crate::diagrams::{
    ascii_diagram, associated_basic, depth, enumerate_basic, is_basic, is_weakly_selfdual,
    sectors, svg_diagram,
};
use crate::ds::{ds_iterate, ell, left_moves, sdim};
use crate::fusion::{tensor_mod_negligible, FusionCache, SuperTensor};
use crate::tannaka::{branching, classify, duality_type, enumerate_classes, Pairing, TannakaGroup};
use crate::weights::Weight;
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use std::io::Write;
use std::path::PathBuf;

pub const SCHEMA: u32 = 1;

#[derive(Parser)]
#[command(name = "glnn", version, about = "Invariants and fusion of maximal atypical GL(n|n) representations")]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Full analysis report for one weight.
    Info {
        /// Weight, e.g. "[3,2,1,0]" or "3,2,1,0".
        weight: String,
        #[arg(long)]
        json: bool,
    },
    /// Derivative summands, optionally iterated.
    Ds {
        weight: String,
        /// Number of derivative steps (defaults to 1, at most the rank).
        #[arg(long, default_value_t = 1)]
        steps: usize,
        #[arg(long)]
        json: bool,
    },
    /// Tensor product of two equal-rank weights modulo negligibles.
    Tensor {
        w1: String,
        w2: String,
        #[arg(long)]
        json: bool,
    },
    /// Basic weights of a rank, or equivalence classes with --classes.
    Enumerate {
        n: usize,
        #[arg(long)]
        classes: bool,
        /// Degree bound for --classes; defaults to n(n-1)/2.
        #[arg(long)]
        degree_bound: Option<i64>,
        /// Keep only weakly selfdual rows.
        #[arg(long)]
        sd_only: bool,
        #[arg(long)]
        json: bool,
    },
    /// Draw the cup diagram.
    Render {
        weight: String,
        #[arg(long, value_enum, default_value_t = RenderFormat::Ascii)]
        format: RenderFormat,
        /// Write to a file instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum RenderFormat {
    Ascii,
    Svg,
}

#[derive(Debug)]
enum CmdError {
    Input(String),
    Io(String),
}

impl CmdError {
    fn code(&self) -> i32 {
        match self {
            CmdError::Input(_) => 2,
            CmdError::Io(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            CmdError::Input(m) | CmdError::Io(m) => m,
        }
    }
}

fn parse_weight(s: &str) -> Result<Weight, CmdError> {
    Weight::parse(s).map_err(|e| CmdError::Input(format!("invalid weight {s:?}: {e}")))
}

pub fn run() -> i32 {
    let cli = Cli::parse();
    // Inputs beyond the exact-arithmetic range abort deep inside the
    // library; surface them as plain input errors instead of a backtrace.
    std::panic::set_hook(Box::new(|_| {}));
    let outcome = std::panic::catch_unwind(|| dispatch(cli));
    let _ = std::panic::take_hook();
    match outcome {
        Ok(Ok(out)) => {
            print!("{out}");
            0
        }
        Ok(Err(e)) => {
            eprintln!("error: {}", e.message());
            e.code()
        }
        Err(payload) => {
            let msg = payload
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| payload.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "computation aborted".to_string());
            eprintln!("error: {msg}");
            2
        }
    }
}

fn dispatch(cli: Cli) -> Result<String, CmdError> {
    match cli.command {
        Command::Info { weight, json } => cmd_info(&parse_weight(&weight)?, json),
        Command::Ds { weight, steps, json } => cmd_ds(&parse_weight(&weight)?, steps, json),
        Command::Tensor { w1, w2, json } => cmd_tensor(&parse_weight(&w1)?, &parse_weight(&w2)?, json),
        Command::Enumerate { n, classes, degree_bound, sd_only, json } => {
            cmd_enumerate(n, classes, degree_bound, sd_only, json)
        }
        Command::Render { weight, format, output } => cmd_render(&parse_weight(&weight)?, format, output),
    }
}

fn group_json(g: &TannakaGroup) -> Value {
    json!({"family": g.family, "dim": g.dim, "conditional": g.conditional})
}

fn duality_json(w: &Weight) -> Value {
    let d = duality_type(w);
    json!({
        "kind": if d.selfdual { "SD" } else { "NSD" },
        "pairing": d.pairing.map(|p| match p { Pairing::Even => "even", Pairing::Odd => "odd" }),
        "proper": d.proper,
    })
}

fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable report");
    s.push('\n');
    s
}

const CONDITIONAL_LEGEND: &str = "* conditional: rests on an open conjecture about invertible objects";

fn cmd_info(w: &Weight, as_json: bool) -> Result<String, CmdError> {
    let (secs, profile) = sectors(w);
    let dim = sdim(w);
    let group = classify(w);
    let basic = associated_basic(w);
    let report = json!({
        "schema": SCHEMA,
        "command": "info",
        "weight": w,
        "n": w.rank(),
        "support": w.support().points(),
        "sectors": secs.iter().map(|s| json!({"interval": [s.start, s.end], "rank": s.rank()})).collect::<Vec<_>>(),
        "gaps": profile.gaps,
        "d0_shift": profile.d0_shift,
        "d0_invariant": profile.d0_invariant,
        "parity": w.parity(),
        "degree": w.degree(),
        "sdim": dim.sdim,
        "duality": duality_json(w),
        "D": left_moves(w),
        "ell": ell(w),
        "det_berezin_power": ell(w),
        "det_conditional": true,
        "basic": basic.weight(),
        "is_basic": is_basic(w),
        "depth": depth(w),
        "group": group_json(&group),
    });
    if as_json {
        return Ok(render_json(&report));
    }
    let d = duality_type(w);
    let duality = if d.selfdual {
        format!(
            "SD, {} pairing, {}",
            match d.pairing.unwrap() {
                Pairing::Even => "even",
                Pairing::Odd => "odd",
            },
            if d.proper.unwrap() { "proper" } else { "weak" }
        )
    } else {
        "NSD".to_string()
    };
    let sector_list = secs
        .iter()
        .map(|s| format!("[{},{}] rank {}", s.start, s.end, s.rank()))
        .collect::<Vec<_>>()
        .join("; ");
    let mut out = String::new();
    out.push_str(&format!("weight    {w}   (n = {})\n", w.rank()));
    out.push_str(&format!("support   {:?}\n", w.support().points()));
    out.push_str(&format!("sectors   {sector_list}\n"));
    out.push_str(&format!(
        "gaps      {:?}   d0 shift {}   d0 invariant {}\n",
        profile.gaps, profile.d0_shift, profile.d0_invariant
    ));
    out.push_str(&format!("parity    {}   degree {}\n", w.parity(), w.degree()));
    out.push_str(&format!("sdim      {}\n", dim.sdim));
    out.push_str(&format!("duality   {duality}\n"));
    out.push_str(&format!("D         {}   ell {}   det = Ber^{}*\n", left_moves(w), ell(w), ell(w)));
    out.push_str(&format!("basic     {}   depth {}\n", basic.weight(), depth(w)));
    out.push_str(&format!("group     {group}\n"));
    out.push_str(CONDITIONAL_LEGEND);
    out.push('\n');
    Ok(out)
}

fn cmd_ds(w: &Weight, steps: usize, as_json: bool) -> Result<String, CmdError> {
    if steps > w.rank() {
        return Err(CmdError::Input(format!("--steps {steps} exceeds the rank {}", w.rank())));
    }
    let entries: Vec<(Weight, u8, i128)> = if steps == 1 {
        branching(w)
            .map_err(|e| CmdError::Input(e.to_string()))?
            .into_iter()
            .map(|(s, d)| (s.weight, s.shift, d.sdim))
            .collect()
    } else {
        ds_iterate(w, steps)
            .map_err(|e| CmdError::Input(e.to_string()))?
            .into_iter()
            .map(|(v, s)| {
                let d = sdim(&v).sdim;
                (v, s, d)
            })
            .collect()
    };
    let report = json!({
        "schema": SCHEMA,
        "command": "ds",
        "weight": w,
        "steps": steps,
        "summands": entries.iter().map(|(v, s, d)| json!({"weight": v, "shift": s, "sdim": d})).collect::<Vec<_>>(),
    });
    if as_json {
        return Ok(render_json(&report));
    }
    let mut out = format!("derivative of {w} ({steps} step{})\n", if steps == 1 { "" } else { "s" });
    for (v, s, d) in &entries {
        let shift = if *s == 1 { "Π " } else { "  " };
        out.push_str(&format!("  {shift}{v}   sdim {d}\n"));
    }
    Ok(out)
}

fn cmd_tensor(w1: &Weight, w2: &Weight, as_json: bool) -> Result<String, CmdError> {
    let mut cache = FusionCache::from_env();
    let st: SuperTensor =
        tensor_mod_negligible(w1, w2, &mut cache).map_err(|e| CmdError::Input(e.to_string()))?;
    let report = json!({
        "schema": SCHEMA,
        "command": "tensor",
        "w1": w1,
        "w2": w2,
        "equivalent": st.equivalent,
        "group": st.group.as_ref().map(group_json),
        "system": st.system.map(|s| s.to_string()),
        "terms": st.terms.iter().map(|t| json!({
            "label": t.weight,
            "multiplicity": t.multiplicity,
            "superdim": t.superdim,
            "berezin_offset": t.berezin_offset,
        })).collect::<Vec<_>>(),
        "superdim_total": st.superdim_total(),
        "conditional": st.group.map(|g| g.conditional).unwrap_or(false),
    });
    if as_json {
        return Ok(render_json(&report));
    }
    let mut out = format!("{w1} ⊗ {w2} modulo negligibles\n");
    match &st.group {
        Some(g) => out.push_str(&format!("equivalent factors; group {g}\n")),
        None => out.push_str("inequivalent factors; one external indecomposable\n"),
    }
    for t in &st.terms {
        let label = match &t.weight {
            Some(wt) => format!("L{wt}"),
            None => "indecomposable".to_string(),
        };
        out.push_str(&format!(
            "  {}x {label}   superdim {}   Ber offset {}\n",
            t.multiplicity, t.superdim, t.berezin_offset
        ));
    }
    out.push_str(&format!("superdim total {}\n", st.superdim_total()));
    if st.group.map(|g| g.conditional).unwrap_or(false) {
        out.push_str(CONDITIONAL_LEGEND);
        out.push('\n');
    }
    Ok(out)
}

fn cmd_enumerate(
    n: usize,
    classes: bool,
    degree_bound: Option<i64>,
    sd_only: bool,
    as_json: bool,
) -> Result<String, CmdError> {
    if classes {
        let bound = degree_bound.unwrap_or((n as i64) * (n as i64 - 1) / 2);
        let list = enumerate_classes(n, bound);
        let report = json!({
            "schema": SCHEMA,
            "command": "enumerate",
            "mode": "classes",
            "n": n,
            "degree_bound": bound,
            "rows": list.iter().map(|(k, g)| json!({"class_key": k, "group": group_json(g)})).collect::<Vec<_>>(),
            "count": list.len(),
        });
        if as_json {
            return Ok(render_json(&report));
        }
        let mut out = format!("equivalence classes for n = {n}, degree ≤ {bound}\n");
        for (k, g) in &list {
            out.push_str(&format!("  {k}   {g}\n"));
        }
        out.push_str(&format!("count {}\n", list.len()));
        out.push_str(CONDITIONAL_LEGEND);
        out.push('\n');
        return Ok(out);
    }
    let rows: Vec<(Weight, i128, TannakaGroup)> = enumerate_basic(n)
        .into_iter()
        .map(|b| b.into_weight())
        .filter(|w| !sd_only || is_weakly_selfdual(w))
        .map(|w| {
            let d = sdim(&w).sdim;
            let g = classify(&w);
            (w, d, g)
        })
        .collect();
    let report = json!({
        "schema": SCHEMA,
        "command": "enumerate",
        "mode": if sd_only { "basic-sd" } else { "basic" },
        "n": n,
        "rows": rows.iter().map(|(w, d, g)| json!({"weight": w, "sdim": d, "group": group_json(g)})).collect::<Vec<_>>(),
        "count": rows.len(),
    });
    if as_json {
        return Ok(render_json(&report));
    }
    let mut out = format!("basic weights for n = {n}{}\n", if sd_only { " (selfdual only)" } else { "" });
    for (w, d, g) in &rows {
        out.push_str(&format!("  {w}   sdim {d}   {g}\n"));
    }
    out.push_str(&format!("count {}\n", rows.len()));
    out.push_str(CONDITIONAL_LEGEND);
    out.push('\n');
    Ok(out)
}

const MAX_RENDER_SPAN: i64 = 20_000;

fn cmd_render(w: &Weight, format: RenderFormat, output: Option<PathBuf>) -> Result<String, CmdError> {
    let span = crate::diagrams::diagram_span(w);
    if span > MAX_RENDER_SPAN {
        return Err(CmdError::Input(format!(
            "diagram of {w} spans {span} vertices, more than the {MAX_RENDER_SPAN} the renderer accepts"
        )));
    }
    let body = match format {
        RenderFormat::Ascii => ascii_diagram(w),
        RenderFormat::Svg => svg_diagram(w),
    };
    match output {
        None => Ok(body),
        Some(path) => {
            let mut f = std::fs::File::create(&path)
                .map_err(|e| CmdError::Io(format!("cannot write {}: {e}", path.display())))?;
            f.write_all(body.as_bytes())
                .map_err(|e| CmdError::Io(format!("cannot write {}: {e}", path.display())))?;
            Ok(String::new())
        }
    }
}
