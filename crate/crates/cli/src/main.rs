use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use twobridge::exactmath::{even_continued_fraction, format_rational, positive_continued_fraction};
use twobridge::jones::{
    calibration_report, grading_set_skein, jones_of_diagram, verify_family, ConventionRecord,
    KhDecomposition,
};
use twobridge::lensfloer::{d_invariant_strict, spinc_table};
use twobridge::orderability::{
    check_formal_determinant, check_not_lo, destabilize_fully, epsilon_matrix, is_strong,
    presentation_from_heegaard, BipartiteMultigraph, GroupPresentation, HeegaardCombinatorics,
    NotLoVerdict, PresentationFile,
};
use twobridge::rho::{i_table, rho, ISign};
use twobridge::twobridge::normalize;

#[derive(Parser)]
#[command(name = "twobridge", version, about = "Invariants of 2-bridge links and lens spaces")]
struct Cli {
    /// Emit JSON instead of text
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Clone, Copy, ValueEnum)]
enum SignArg {
    Plus,
    Minus,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classical invariants of K(p,q)
    Invariants {
        #[arg(allow_negative_numbers = true)]
        p: i64,
        #[arg(allow_negative_numbers = true)]
        q: i64,
    },
    /// Jones polynomial of K(p,q), each orientation class
    Jones {
        #[arg(allow_negative_numbers = true)]
        p: i64,
        #[arg(allow_negative_numbers = true)]
        q: i64,
    },
    /// Correction terms d(L(p,q), i)
    Dinv {
        p: i64,
        #[arg(allow_negative_numbers = true)]
        q: i64,
        i: Option<i64>,
    },
    /// ρ-invariant ρ(a, b, n)
    Rho {
        a: i64,
        b: i64,
        #[arg(allow_negative_numbers = true)]
        n: i64,
    },
    /// I(𝔰) = 8d + ρ for every Spin^c structure of L(p,q)
    Ivals {
        p: i64,
        #[arg(allow_negative_numbers = true)]
        q: i64,
        /// Sign in front of ρ (default: the frozen convention)
        #[arg(long, value_enum)]
        sign: Option<SignArg>,
    },
    /// Check every identity on all links with p ≤ pmax
    Verify {
        #[arg(long, default_value_t = 12)]
        pmax: i64,
    },
    /// Search the convention space on the seed family
    Calibrate {
        #[arg(long, default_value_t = 12)]
        seed_pmax: i64,
    },
    /// Left-orderability obstructions
    Order {
        #[command(subcommand)]
        cmd: OrderCmd,
    },
}

#[derive(Subcommand)]
enum OrderCmd {
    /// Sign matrix and both obstructions for a presentation file
    CheckPresentation { file: PathBuf },
    /// Strong-diagram test and induced presentation for a Heegaard file
    CheckHeegaard { file: PathBuf },
    /// Remove leaves until genus 1 or none remain
    Destabilize { file: PathBuf },
}

fn emit(json_mode: bool, value: Value, text: impl FnOnce() -> String) {
    if json_mode {
        println!("{}", serde_json::to_string_pretty(&value).unwrap());
    } else {
        print!("{}", text());
    }
}

fn read_json<T: serde::de::DeserializeOwned>(path: &PathBuf) -> Result<T> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))
}

/// Ok(true) on success, Ok(false) on a failed verification.
fn run(cli: Cli) -> Result<bool> {
    let js = cli.json;
    match cli.cmd {
        Cmd::Invariants { p, q } => {
            let k = normalize(p, q)?;
            let sigs: Vec<(String, i64)> = k
                .orientations()
                .into_iter()
                .map(|o| (format!("{o:?}").to_lowercase(), k.signature(o).unwrap()))
                .collect();
            let lk = k.linking_number().ok();
            let d = k.diagram();
            let cf = if k.is_unknot() {
                vec![]
            } else {
                positive_continued_fraction(k.p, k.q)
            };
            let ecf = (!k.is_unknot()).then(|| even_continued_fraction(k.p, k.q).unwrap().entries);
            let m = grading_set_skein(&k)?;
            let v = json!({
                "p": k.p, "q": k.q, "mirror": k.mirror,
                "components": k.components(),
                "determinant": k.determinant(),
                "crossings": d.crossing_count(),
                "continued_fraction": cf,
                "even_continued_fraction": ecf,
                "signature": sigs.iter().map(|(o, s)| json!({"orientation": o, "sigma": s})).collect::<Vec<_>>(),
                "linking_number": lk,
                "grading_set": m,
            });
            emit(js, v, || {
                let mut s = format!("{k}\n  components   {}\n  determinant  {}\n  crossings    {}\n  cf           {cf:?}\n",
                    k.components(), k.determinant(), d.crossing_count());
                for (o, sg) in &sigs {
                    s += &format!("  sigma({o})    {sg}\n");
                }
                if let Some(l) = lk {
                    s += &format!("  lk           {l}\n");
                }
                s += &format!("  M(K)         {:?}  (c = {:?})\n", m.elements, m.c);
                s
            });
        }
        Cmd::Jones { p, q } => {
            let k = normalize(p, q)?;
            let rows: Vec<(String, i64, _)> = k
                .orientations()
                .into_iter()
                .map(|o| {
                    let d = k.oriented_diagram(o).unwrap();
                    (format!("{o:?}").to_lowercase(), d.signature(), jones_of_diagram(&d))
                })
                .collect();
            let m = grading_set_skein(&k)?;
            let kh = KhDecomposition::from_grading_set(&m, rows[0].1);
            let v = json!({
                "p": k.p, "q": k.q,
                "jones": rows.iter().map(|(o, s, j)| json!({"orientation": o, "sigma": s, "polynomial": j})).collect::<Vec<_>>(),
                "khovanov": kh,
            });
            emit(js, v, || {
                rows.iter()
                    .map(|(o, _, j)| format!("{k} {o}: {j}\n"))
                    .collect()
            });
        }
        Cmd::Dinv { p, q, i } => match i {
            Some(i) => {
                let d = d_invariant_strict(p, q, i)?;
                emit(js, json!({"p": p, "q": q, "i": i, "d": format_rational(&d)}), || {
                    format!("{}\n", format_rational(&d))
                });
            }
            None => {
                let t = spinc_table(p, q)?;
                emit(js, serde_json::to_value(&t)?, || {
                    // one value per line in index order; spin data is in --json
                    t.rows
                        .iter()
                        .map(|r| format!("{}\n", format_rational(&r.d)))
                        .collect()
                });
            }
        },
        Cmd::Rho { a, b, n } => {
            let r = rho(a, b, n)?;
            emit(js, json!({"a": a, "b": b, "n": n, "rho": format_rational(&r)}), || {
                format!("{}\n", format_rational(&r))
            });
        }
        Cmd::Ivals { p, q, sign } => {
            let sign = match sign {
                Some(SignArg::Plus) => ISign::Plus,
                Some(SignArg::Minus) => ISign::Minus,
                None => ConventionRecord::frozen().i_sign,
            };
            let rows = i_table(p, q, sign)?;
            let all_integral = rows.iter().all(|r| r.value.is_some());
            emit(
                js,
                json!({"p": p, "q": q, "sign": sign, "rows": rows, "integral": all_integral}),
                || {
                    rows.iter()
                        .map(|r| {
                            format!(
                                "{:>4}  I = {:>12}{}\n",
                                r.i,
                                match r.value {
                                    Some(v) => v.to_string(),
                                    None => format_rational(&r.exact),
                                },
                                if r.spin { "  spin" } else { "" }
                            )
                        })
                        .collect()
                },
            );
            return Ok(all_integral);
        }
        Cmd::Verify { pmax } => {
            let conv = ConventionRecord::frozen();
            let r = verify_family(pmax, &conv);
            let ok = r.all_pass;
            let summary = |r: &twobridge::jones::FamilyReport| {
                let mut s = format!(
                    "{} links with p <= {} under convention i_sign={} spinc_sum={:?} chirality={:?} endpoint={:?}\n",
                    r.links,
                    r.pmax,
                    conv.i_sign.as_str(),
                    conv.spinc_sum,
                    conv.chirality,
                    conv.odd_p_endpoint
                );
                for (name, n) in [
                    ("main_identity", r.main_identity_failures),
                    ("corrected_identity", r.corrected_identity_failures),
                    ("skeinproof", r.skeinproof_failures),
                    ("dual_route", r.dual_route_failures),
                    ("determinant", r.determinant_failures),
                ] {
                    s += &format!(
                        "  {name:<20} {}\n",
                        if n == 0 {
                            "pass".to_string()
                        } else {
                            format!("FAIL ({n} links)")
                        }
                    );
                }
                if let Some((p, q)) = r.main_identity_smallest_failure {
                    s += &format!("  smallest main_identity failure: K({p},{q})\n");
                    if let Some(e) = r.entries.iter().find(|e| !e.main_identity) {
                        if let (Some(l), Some(rh)) = (&e.lhs, &e.rhs) {
                            s += &format!("    lhs = {l}\n    rhs = {rh}\n");
                        }
                    }
                }
                s += if r.all_pass { "all pass\n" } else { "verification failed\n" };
                s
            };
            emit(js, serde_json::to_value(&r)?, || summary(&r));
            return Ok(ok);
        }
        Cmd::Calibrate { seed_pmax } => {
            let r = calibration_report(seed_pmax);
            let ok = r.main_identity_holds;
            emit(js, serde_json::to_value(&r)?, || {
                let mut s = format!("convention search on p <= {}\n", r.seed_pmax);
                for c in &r.candidates {
                    let v = &c.convention;
                    s += &format!(
                        "  {:<5} {:<8} {:<9} {:<5} integral={:<5} skeinproof={:<5} ",
                        v.i_sign.as_str(),
                        format!("{:?}", v.spinc_sum),
                        format!("{:?}", v.chirality),
                        format!("{:?}", v.odd_p_endpoint),
                        c.integral,
                        c.skeinproof
                    );
                    s += &match &c.first_failure {
                        None => "holds\n".to_string(),
                        Some(f) => format!(
                            "first failure K({},{}) ({} of seed)\n",
                            f.p, f.q, c.failures_in_seed
                        ),
                    };
                }
                s += &format!(
                    "main identity: {}\nselected: {}\n",
                    if ok { "unique surviving convention" } else { "no surviving convention" },
                    serde_json::to_string(&r.selected).unwrap()
                );
                s
            });
            return Ok(ok);
        }
        Cmd::Order { cmd } => return run_order(js, cmd),
    }
    Ok(true)
}

fn not_lo_text(v: &NotLoVerdict) -> String {
    match v {
        NotLoVerdict::Obstructed => "obstructed".into(),
        NotLoVerdict::Inconclusive { witness } => format!(
            "inconclusive (d = {})",
            witness.iter().map(|s| s.to_string()).collect::<String>()
        ),
    }
}

/// Ok(true) when some obstruction applies.
fn run_order(js: bool, cmd: OrderCmd) -> Result<bool> {
    match cmd {
        OrderCmd::CheckPresentation { file } => {
            let f: PresentationFile = read_json(&file)?;
            let g = GroupPresentation::parse(&f)?;
            let e = epsilon_matrix(&g);
            let nlo = check_not_lo(&e);
            let fd = check_formal_determinant(&e).ok();
            let obstructed =
                nlo == NotLoVerdict::Obstructed || fd.as_ref().is_some_and(|v| v.passed());
            emit(
                js,
                json!({"epsilon": e, "not_lo": nlo, "formal_determinant": fd, "obstructed": obstructed}),
                || {
                    format!(
                        "{e}not-LO lemma: {}\nformal determinant: {}\n",
                        not_lo_text(&nlo),
                        match &fd {
                            None => "n/a (not square)".into(),
                            Some(v) => serde_json::to_string(v).unwrap(),
                        }
                    )
                },
            );
            Ok(obstructed)
        }
        OrderCmd::CheckHeegaard { file } => {
            let h: HeegaardCombinatorics = read_json(&file)?;
            h.validate()?;
            let r = is_strong(&h)?;
            let g = presentation_from_heegaard(&h);
            let e = epsilon_matrix(&g);
            let fd = check_formal_determinant(&e)?;
            let nlo = check_not_lo(&e);
            emit(
                js,
                json!({"strong": r, "presentation": g.to_file(), "epsilon": e,
                       "formal_determinant": fd, "not_lo": nlo}),
                || {
                    format!(
                        "genus {}  generators {}  |det| {}  strong {}{}\n{}formal determinant: {}\nnot-LO lemma: {}\n",
                        r.genus,
                        r.generator_count,
                        r.determinant,
                        r.strong,
                        if r.flipped_alpha1 { " (alpha_1 reversed)" } else { "" },
                        e,
                        serde_json::to_string(&fd).unwrap(),
                        not_lo_text(&nlo)
                    )
                },
            );
            Ok(fd.passed() || nlo == NotLoVerdict::Obstructed)
        }
        OrderCmd::Destabilize { file } => {
            let h: HeegaardCombinatorics = read_json(&file)?;
            let steps = destabilize_fully(&h)?;
            let last = steps.last().map_or(h.clone(), |s| s.diagram.clone());
            let leaf_left = BipartiteMultigraph::from_heegaard(&last).find_leaf().is_some();
            let reached_genus_one = last.genus == 1;
            emit(
                js,
                json!({"steps": steps, "final": last, "reached_genus_one": reached_genus_one}),
                || {
                    let mut s = String::new();
                    for st in &steps {
                        s += &format!(
                            "removed alpha_{} / beta_{} -> genus {}\n",
                            st.removed_alpha, st.removed_beta, st.diagram.genus
                        );
                    }
                    s += &format!(
                        "final genus {}{}\n",
                        last.genus,
                        if !reached_genus_one && !leaf_left { " (no leaf)" } else { "" }
                    );
                    s
                },
            );
            Ok(reached_genus_one)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
