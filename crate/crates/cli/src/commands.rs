use std::collections::BTreeMap;
use std::io::Read;

use serde::Serialize;
use serde_json::Value;

use wallcross::potential::{build_potential_on, gradient_eval, trace_eval, Potential, PotentialKind};
use wallcross::quiver::{build_quiver, QuiverKind};
use wallcross::rational::{self, Rational};
use wallcross::representation::Representation;
use wallcross::series::{self, IntSeries};
use wallcross::sod::{self, BoundsMode, MuParam};
use wallcross::stability::{self, FramedRep, Side};
use wallcross::zonotope::{make_zonotope, MembershipCertificate, ZonotopeKind};

use crate::args::{
    Cli, Command, DecompArgs, KindArgs, OutFormat, PolyAction, PotentialArgs, QuiverArgs, SeriesAction, SodArgs,
    StabArgs,
};
use crate::table;

pub enum Status {
    Ok,
    VerificationFailed,
}

pub enum Failure {
    Usage(String),
    Domain(String),
}

impl From<wallcross::Error> for Failure {
    fn from(e: wallcross::Error) -> Self {
        Failure::Domain(e.to_string())
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::Domain(format!("json: {e}"))
    }
}

type Outcome = Result<Status, Failure>;

pub fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Quiver(a) => quiver(cli, a),
        Command::Grad(a) => grad(cli, a),
        Command::Crit(a) => crit(cli, a),
        Command::Stab(a) => stab(cli, a),
        Command::Poly(p) => match &p.action {
            PolyAction::Show(k) => poly_show(cli, k),
            PolyAction::Member { kind, point, direction } => poly_member(cli, kind, point, direction.as_deref()),
        },
        Command::Sod(a) => sod_cmd(cli, a),
        Command::Decomp(a) => decomp(cli, a),
        Command::Series(s) => series_cmd(cli, &s.action),
    }
}

fn emit<T: Serialize>(value: &T) -> Result<(), Failure> {
    println!("{}", serde_json::to_string(value)?);
    Ok(())
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure::Usage(msg.into())
}

fn read_input(cli: &Cli) -> Result<Value, Failure> {
    let src = cli.input.as_deref().ok_or_else(|| usage("this subcommand needs --input"))?;
    let text = if src.trim_start().starts_with(['{', '[']) {
        src.to_string()
    } else if src == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Domain(format!("stdin: {e}")))?;
        s
    } else {
        std::fs::read_to_string(src).map_err(|e| Failure::Domain(format!("{src}: {e}")))?
    };
    Ok(serde_json::from_str(&text)?)
}

fn params<'a>(pairs: &[(&'a str, Option<i64>)]) -> BTreeMap<&'a str, i64> {
    pairs.iter().filter_map(|(k, v)| v.map(|v| (*k, v))).collect()
}

fn quiver(cli: &Cli, a: &QuiverArgs) -> Outcome {
    let p = params(&[("a", a.a), ("r", a.r), ("m", a.m), ("N", a.n)]);
    let kind = QuiverKind::from_name(&a.kind, &p).map_err(|e| usage(e.to_string()))?;
    let q = build_quiver(kind)?;
    match cli.out {
        OutFormat::Json => emit(&q)?,
        OutFormat::Table => {
            let rows: Vec<Vec<String>> =
                q.arrows().iter().map(|x| vec![x.id.clone(), x.src.clone(), x.tgt.clone()]).collect();
            println!("vertices: {}", q.vertices().join(" "));
            println!("{}", table::render(&["arrow", "src", "tgt"], &rows));
        }
    }
    Ok(Status::Ok)
}

/// Representation and potential from `--input`, falling back to a built-in
/// potential placed on the representation's quiver.
fn rep_and_potential(cli: &Cli, a: &PotentialArgs) -> Result<(Representation, Potential), Failure> {
    let mut v = read_input(cli)?;
    let (rep_v, pot_v) = match v.get_mut("representation") {
        Some(r) => {
            let r = r.take();
            (r, v.get_mut("potential").map(Value::take))
        }
        None => (v, None),
    };
    let rep: Representation = serde_json::from_value(rep_v)?;
    let pot = match (pot_v, &a.potential) {
        (Some(p), None) => serde_json::from_value(p)?,
        (None, Some(name)) => {
            let kind = PotentialKind::from_name(name, &params(&[("a", a.a), ("r", a.r)]))
                .map_err(|e| usage(e.to_string()))?;
            build_potential_on(kind, rep.quiver())?
        }
        (Some(_), Some(_)) => return Err(usage("the input already carries a potential; drop --potential")),
        (None, None) => return Err(usage("no potential: pass --potential or put one in the input")),
    };
    Ok((rep, pot))
}

fn matrix_cells(m: &wallcross::Matrix) -> String {
    m.data().iter().map(rational::format).collect::<Vec<_>>().join(" ")
}

fn grad(cli: &Cli, a: &PotentialArgs) -> Outcome {
    let (rep, pot) = rep_and_potential(cli, a)?;
    let grad = gradient_eval(&rep, &pot)?;
    let trace = trace_eval(&rep, &pot)?;
    match cli.out {
        OutFormat::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                trace: String,
                gradient: &'a BTreeMap<String, wallcross::Matrix>,
            }
            emit(&Out { trace: rational::format(&trace), gradient: &grad })?;
        }
        OutFormat::Table => {
            let rows: Vec<Vec<String>> = grad
                .iter()
                .map(|(id, m)| vec![id.clone(), format!("{}x{}", m.rows(), m.cols()), matrix_cells(m)])
                .collect();
            println!("trace: {}", rational::format(&trace));
            println!("{}", table::render(&["arrow", "shape", "entries"], &rows));
        }
    }
    Ok(Status::Ok)
}

fn crit(cli: &Cli, a: &PotentialArgs) -> Outcome {
    let (rep, pot) = rep_and_potential(cli, a)?;
    let grad = gradient_eval(&rep, &pot)?;
    let nonzero: Vec<&String> = grad.iter().filter(|(_, m)| !m.is_zero()).map(|(id, _)| id).collect();
    match cli.out {
        OutFormat::Json => {
            #[derive(Serialize)]
            struct Out<'a> {
                critical: bool,
                nonzero_arrows: Vec<&'a String>,
            }
            emit(&Out { critical: nonzero.is_empty(), nonzero_arrows: nonzero })?;
        }
        OutFormat::Table => {
            println!("critical: {}", nonzero.is_empty());
            for id in nonzero {
                println!("nonzero gradient at {id}");
            }
        }
    }
    Ok(Status::Ok)
}

fn stab(cli: &Cli, a: &StabArgs) -> Outcome {
    let rep: FramedRep = serde_json::from_value(read_input(cli)?)?;
    let dt = stability::is_dt_semistable(&rep);
    let pt = stability::is_pt_semistable(&rep);
    let dt_witness = stability::one_ps_falsifier(&rep, Side::Dt, a.trials, cli.seed);
    let pt_witness = stability::one_ps_falsifier(&rep, Side::Pt, a.trials, cli.seed);
    let gauge = stability::gauge_invariance_violation(&rep, a.conjugations, cli.seed);
    // A one-parameter witness on a semistable side, or a verdict that moves
    // under a base change, contradicts the subspace tests.
    let consistent = !(dt.semistable && dt_witness.is_some())
        && !(pt.semistable && pt_witness.is_some())
        && gauge.is_none();
    match cli.out {
        OutFormat::Json => {
            #[derive(Serialize)]
            struct Falsifier {
                dt: Option<stability::OnePsWitness>,
                pt: Option<stability::OnePsWitness>,
            }
            #[derive(Serialize)]
            struct Out {
                dt: stability::StabilityVerdict,
                pt: stability::StabilityVerdict,
                falsifier: Falsifier,
                gauge_violation: Option<wallcross::Matrix>,
                consistent: bool,
            }
            emit(&Out {
                dt,
                pt,
                falsifier: Falsifier { dt: dt_witness, pt: pt_witness },
                gauge_violation: gauge,
                consistent,
            })?;
        }
        OutFormat::Table => {
            let show = |w: &Option<stability::OnePsWitness>| {
                w.as_ref().map_or("none".to_string(), |w| format!("k = {:?}", w.exponents))
            };
            let rows = vec![
                vec!["dt".to_string(), dt.semistable.to_string(), show(&dt_witness)],
                vec!["pt".to_string(), pt.semistable.to_string(), show(&pt_witness)],
            ];
            println!("{}", table::render(&["side", "semistable", "1-ps witness"], &rows));
            println!("gauge invariant: {}", gauge.is_none());
        }
    }
    Ok(if consistent { Status::Ok } else { Status::VerificationFailed })
}

fn zonotope_kind(k: &KindArgs) -> Result<ZonotopeKind, Failure> {
    let need = |name: &str, v: Option<u32>| v.ok_or_else(|| usage(format!("--kind {} needs --{name}", k.kind)));
    Ok(match k.kind.as_str() {
        "W" => ZonotopeKind::W { d: k.d },
        "WSlice" | "W_slice" => {
            ZonotopeKind::WSlice { d: k.d, w: k.w.ok_or_else(|| usage("--kind WSlice needs --w"))? }
        }
        "V" => ZonotopeKind::V { d: k.d, r: need("r", k.r)? },
        "Wa" | "W^a" => ZonotopeKind::Wa { d: k.d, a: need("a", k.a)? },
        "Va" | "V^a" => ZonotopeKind::Va { d: k.d, a: need("a", k.a)?, r: need("r", k.r)? },
        other => return Err(usage(format!("unknown window kind `{other}` (W, WSlice, V, Wa, Va)"))),
    })
}

fn poly_show(cli: &Cli, k: &KindArgs) -> Outcome {
    let z = make_zonotope(zonotope_kind(k)?)?;
    match cli.out {
        OutFormat::Json => emit(&z)?,
        OutFormat::Table => {
            let q = |v: &[Rational]| v.iter().map(rational::format).collect::<Vec<_>>().join(",");
            let mut rows: Vec<Vec<String>> = z
                .generators
                .iter()
                .map(|g| {
                    let lo = if g.lo_open { "(" } else { "[" };
                    let hi = if g.hi_open { ")" } else { "]" };
                    let range = format!("{lo}{}, {}{hi}", rational::format(&g.lo), rational::format(&g.hi));
                    vec![q(&g.vector), range]
                })
                .collect();
            rows.extend(z.lineality.iter().map(|l| vec![q(&l.0), "line".to_string()]));
            println!("translate: {}", q(&z.translate));
            println!("{}", table::render(&["direction", "coefficient"], &rows));
        }
    }
    Ok(Status::Ok)
}

fn poly_member(cli: &Cli, k: &KindArgs, point: &str, direction: Option<&str>) -> Outcome {
    let z = make_zonotope(zonotope_kind(k)?)?;
    let p = rational::parse_list(point).map_err(|e| usage(e.to_string()))?;
    let cert = match direction {
        Some(u) => {
            let u = rational::parse_list(u).map_err(|e| usage(e.to_string()))?;
            z.contains_moving(&p, &u)?
        }
        None => z.contains(&p)?,
    };
    match cli.out {
        OutFormat::Json => emit(&cert)?,
        OutFormat::Table => match &cert {
            MembershipCertificate::Infeasible => println!("infeasible"),
            MembershipCertificate::Feasible { coefficients, lineality, moving } => {
                println!("feasible");
                let mut rows: Vec<Vec<String>> = coefficients
                    .iter()
                    .enumerate()
                    .map(|(i, c)| {
                        let slope = moving.as_ref().map_or(String::new(), |m| rational::format(&m.eps_coefficients[i]));
                        vec![format!("g{}", i + 1), rational::format(c), slope]
                    })
                    .collect();
                rows.extend(lineality.iter().enumerate().map(|(i, c)| {
                    let slope = moving.as_ref().map_or(String::new(), |m| rational::format(&m.eps_lineality[i]));
                    vec![format!("l{}", i + 1), rational::format(c), slope]
                }));
                println!("{}", table::render(&["term", "coefficient", "eps slope"], &rows));
            }
        },
    }
    Ok(Status::Ok)
}

fn parse_mu(s: &str) -> Result<MuParam, Failure> {
    s.parse().map_err(|e: wallcross::Error| usage(format!("--mu: {e}")))
}

fn sod_cmd(cli: &Cli, a: &SodArgs) -> Outcome {
    let mu = parse_mu(&a.mu)?;
    let mode: BoundsMode = a.mode.parse().map_err(|e: wallcross::Error| usage(format!("--mode: {e}")))?;
    let summands = sod::enumerate_summands(a.d, a.r, a.a, &mu, mode)?;
    match cli.out {
        OutFormat::Json if summands.is_empty() => println!("[]"),
        OutFormat::Json => {
            for s in &summands {
                emit(s)?;
            }
        }
        OutFormat::Table => {
            let rows: Vec<Vec<String>> = summands
                .iter()
                .map(|s| {
                    let parts: Vec<String> = s.parts.iter().map(|p| format!("({}, {}, {})", p.d, p.w, p.v)).collect();
                    vec![s.d_prime.to_string(), parts.join(" ")]
                })
                .collect();
            println!("{}", table::render(&["d'", "parts (d_i, w_i, v_i)"], &rows));
        }
    }
    Ok(Status::Ok)
}

fn decomp(cli: &Cli, a: &DecompArgs) -> Outcome {
    let mu = parse_mu(&a.mu)?;
    match (&a.chi, a.d) {
        (Some(chi), None) => {
            let chi: Vec<i64> = chi
                .split(',')
                .map(|x| x.trim().parse::<i64>())
                .collect::<Result<_, _>>()
                .map_err(|e| usage(format!("--chi: {e}")))?;
            let found = sod::decompose_weight(&chi, a.a, a.r, &mu)?;
            match cli.out {
                OutFormat::Json => emit(&found)?,
                OutFormat::Table => {
                    let rows: Vec<Vec<String>> = found
                        .iter()
                        .map(|x| {
                            let parts: Vec<String> = x.summand.parts.iter().map(|p| format!("({}, {}, {})", p.d, p.w, p.v)).collect();
                            vec![x.summand.d_prime.to_string(), parts.join(" "), format!("{:?}", x.chi_parts), format!("{:?}", x.chi_prime)]
                        })
                        .collect();
                    println!("{}", table::render(&["d'", "parts", "chi_i", "chi'"], &rows));
                }
            }
            Ok(Status::Ok)
        }
        (None, Some(d)) => {
            if !sod::check_generic(&mu, d) {
                return Err(Failure::Domain(format!("mu = {mu} is not generic for d = {d}")));
            }
            let report = sod::sweep_unique_decomposition(d, a.a, a.r, &mu)?;
            match cli.out {
                OutFormat::Json => emit(&report)?,
                OutFormat::Table => {
                    println!("admissible weights: {}", report.admissible);
                    println!("violations: {}", report.violations.len());
                    for (chi, n) in &report.violations {
                        println!("  {chi:?}: {n} decompositions");
                    }
                }
            }
            Ok(if report.violations.is_empty() { Status::Ok } else { Status::VerificationFailed })
        }
        _ => Err(usage("decomp needs exactly one of --chi and --d")),
    }
}

fn series_table(columns: &[(&str, &IntSeries)]) -> String {
    let n = columns.iter().map(|(_, s)| s.coeffs.len()).max().unwrap_or(0);
    let rows: Vec<Vec<String>> = (0..n)
        .map(|i| {
            let mut row = vec![i.to_string()];
            row.extend(columns.iter().map(|(_, s)| s.coeffs.get(i).map_or(String::new(), ToString::to_string)));
            row
        })
        .collect();
    let mut header = vec!["d"];
    header.extend(columns.iter().map(|(h, _)| *h));
    table::render(&header, &rows)
}

fn series_cmd(cli: &Cli, action: &SeriesAction) -> Outcome {
    let (name, s) = match action {
        SeriesAction::Verify(o) => {
            let rep = series::verify_identity(o.r, o.order)?;
            match cli.out {
                OutFormat::Json => emit(&rep)?,
                OutFormat::Table => {
                    println!(
                        "{}",
                        series_table(&[("dt", &rep.dt), ("euler", &rep.euler), ("macmahon^r", &rep.macmahon_power)])
                    );
                    match rep.first_discrepancy {
                        None => println!("equal through q^{}", o.order),
                        Some(i) => println!("first discrepancy at q^{i}"),
                    }
                }
            }
            return Ok(if rep.equal { Status::Ok } else { Status::VerificationFailed });
        }
        SeriesAction::Dt(o) => ("dt", series::dt_series(o.order, o.r)?),
        SeriesAction::Euler(o) => ("euler", series::euler_product_gamma(o.r, o.order)),
        SeriesAction::Macmahon(o) => ("macmahon^r", series::series_pow(&series::macmahon(o.order), o.r, o.order)),
    };
    match cli.out {
        OutFormat::Json => emit(&s)?,
        OutFormat::Table => println!("{}", series_table(&[(name, &s)])),
    }
    Ok(Status::Ok)
}
