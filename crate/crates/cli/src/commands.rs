use std::collections::BTreeMap;
use std::io::Read;
use std::sync::Arc;

use filquiv::criteria::CriterionRegistry;
use filquiv::exactla::{Field, FieldSpec, PrimeField, Rationals};
use filquiv::filtr::{
    classify_point_type, gr, gr_max, hn_filtration_seeded, is_polystable, jh_filtration, maximal_flag,
    s_equivalent, sjh_equivalent, Filtration,
};
use filquiv::git::oracle::enumerate_points;
use filquiv::git::{filtration_from_ops, hilbert_mumford_semistable, ops_limit, pairing_chi_lambda, Locus, OnePS};
use filquiv::quiver::{build_ladder, indecomposable_projective, LadderQuiver, Quiver};
use filquiv::rep::{is_torsion, kappa, tf_resolution, torsion_part, Morphism, Representation, Subrep};
use filquiv::semiinv::{certificate_search, kappa_presentation, theta_coordinates, CertificateBounds, CertificateOutcome};
use filquiv::stability::{rational_verdict, verdict, Convention, StabilityParams, SubMode};
use serde_json::{json, Value};

use crate::doc::{
    matrix_rows, parse_field, Document, Kind, LadderPayload, PresentationPayload, QuiverPayload, ReportPayload,
    RepresentationPayload, Settings, StabilityPayload,
};
use crate::error::{CliError, EXIT_INCONCLUSIVE, EXIT_OK};
use crate::{Cli, Command, ConventionArg, LadderSource, LocusArg};

pub struct CommandOutput {
    pub code: i32,
    pub doc: Document,
    /// Printed to stderr alongside a successful document (exit 4).
    pub diagnostic: Option<CliError>,
}

impl CommandOutput {
    fn ok(doc: Document) -> Self {
        CommandOutput {
            code: EXIT_OK,
            doc,
            diagnostic: None,
        }
    }
}

type Res<T> = Result<T, CliError>;

macro_rules! any_field {
    ($spec:expr, $f:ident => $body:expr) => {
        match $spec {
            FieldSpec::Rationals => {
                let $f = Rationals;
                $body
            }
            FieldSpec::Prime(p) => {
                let $f = PrimeField::new(p)?;
                $body
            }
        }
    };
}

struct Ctx<'a> {
    cli: &'a Cli,
    stdin: &'a mut dyn Read,
    stdin_used: bool,
    inputs: BTreeMap<String, Document>,
}

impl Ctx<'_> {
    fn load(&mut self, name: &str, path: &str) -> Res<Document> {
        let text = if path == "-" {
            if self.stdin_used {
                return Err(CliError::validation("only one input can be read from stdin"));
            }
            self.stdin_used = true;
            let mut s = String::new();
            self.stdin
                .read_to_string(&mut s)
                .map_err(|e| CliError::io(format!("stdin: {e}")))?;
            s
        } else {
            std::fs::read_to_string(path).map_err(|e| CliError::io(format!("{path}: {e}")))?
        };
        let doc = Document::parse(&text).map_err(|e| e.context(name))?;
        self.inputs.insert(name.to_string(), doc.clone());
        Ok(doc)
    }

    fn rep_payload(&mut self, name: &str, path: &str) -> Res<RepresentationPayload> {
        self.load(name, path)?.expect(Kind::Representation)
    }

    fn stab_payload(&mut self, path: &str) -> Res<StabilityPayload> {
        self.load("stab", path)?.expect(Kind::Stability)
    }

    fn pres_payload(&mut self, name: &str, path: &str) -> Res<PresentationPayload> {
        self.load(name, path)?.expect(Kind::Presentation)
    }

    /// The `--field` flag and every input must name the same field.
    fn field(&self, from_docs: &[FieldSpec]) -> Res<FieldSpec> {
        let flag = self.cli.global.field.as_deref().map(parse_field).transpose()?;
        let chosen = flag.or(from_docs.first().copied()).unwrap_or(FieldSpec::Rationals);
        if let Some(other) = from_docs.iter().find(|&&d| d != chosen) {
            return Err(CliError::validation(format!("inputs mix the fields {chosen} and {other}")));
        }
        Ok(chosen)
    }

    fn params(&self, payload: &StabilityPayload, l: &LadderQuiver) -> Res<StabilityParams> {
        Ok(payload.to_params(l)?.with_cap(self.cli.global.cap as u128))
    }

    fn conventions(&self, p: &StabilityParams) -> Vec<Convention> {
        match self.cli.global.convention {
            None => vec![p.convention],
            Some(ConventionArg::Subgeq) => vec![Convention::SubNonneg],
            Some(ConventionArg::Subleq) => vec![Convention::SubNonpos],
            Some(ConventionArg::Both) => Convention::BOTH.to_vec(),
        }
    }

    fn ladder(&mut self, src: &LadderSource) -> Res<Arc<LadderQuiver>> {
        if let Some(path) = &src.ladder {
            if src.levels.is_some() {
                return Err(CliError::validation("--levels cannot be combined with --ladder"));
            }
            return self.load("ladder", path)?.expect::<LadderPayload>(Kind::Ladder)?.to_ladder();
        }
        let base = match &src.quiver {
            Some(path) => self.load("quiver", path)?.expect::<QuiverPayload>(Kind::Quiver)?.to_quiver()?,
            None => preset(src.base.as_deref().unwrap_or("trivial"))?,
        };
        let levels = src
            .levels
            .ok_or_else(|| CliError::validation("--levels is required without --ladder"))?;
        Ok(build_ladder(&base, levels)?)
    }

    fn report(&self, command: &str, field: Option<FieldSpec>, conventions: &[Convention], result: Value) -> Document {
        let g = &self.cli.global;
        let convention = match conventions {
            [] => g.convention.map_or("subgeq".to_string(), convention_arg_name),
            [c] => c.to_string(),
            _ => "both".to_string(),
        };
        let payload = ReportPayload {
            command: command.to_string(),
            settings: Settings {
                field: field.map(|f| f.to_string()),
                convention,
                criterion: g.criterion.clone(),
                cap: g.cap,
                seed: g.seed,
                jobs: g.jobs,
            },
            inputs: self.inputs.clone(),
            result,
        };
        Document::new(Kind::Report, &payload)
    }
}

fn convention_arg_name(c: ConventionArg) -> String {
    match c {
        ConventionArg::Subgeq => "subgeq",
        ConventionArg::Subleq => "subleq",
        ConventionArg::Both => "both",
    }
    .to_string()
}

fn preset(name: &str) -> Res<Quiver> {
    match name {
        "trivial" => Ok(Quiver::trivial()),
        "square" => Ok(Quiver::square()),
        _ => {
            let n = name
                .strip_prefix("linear:")
                .and_then(|n| n.parse::<usize>().ok())
                .filter(|&n| n >= 1)
                .ok_or_else(|| {
                    CliError::parse(format!("unknown base '{name}', expected trivial, square or linear:<n>"))
                })?;
            Ok(Quiver::linear(n))
        }
    }
}

fn locus(l: LocusArg) -> Locus {
    match l {
        LocusArg::Rel => Locus::Rel,
        LocusArg::Fil => Locus::Fil,
    }
}

fn prime(spec: FieldSpec, command: &str) -> Res<PrimeField> {
    match spec {
        FieldSpec::Prime(p) => Ok(PrimeField::new(p)?),
        FieldSpec::Rationals => Err(CliError::validation(format!(
            "`{command}` enumerates subobjects and needs a prime field (--field fp:<p>)"
        ))),
    }
}

fn parse_usize_list(s: &str) -> Res<Vec<usize>> {
    s.split(',')
        .map(|x| x.trim().parse::<usize>().map_err(|e| CliError::parse(format!("bad entry '{x}' in '{s}': {e}"))))
        .collect()
}

fn parse_weights(s: &str) -> Res<Vec<Vec<i64>>> {
    s.split(';')
        .map(|group| {
            group
                .split(',')
                .map(str::trim)
                .filter(|x| !x.is_empty())
                .map(|x| x.parse::<i64>().map_err(|e| CliError::parse(format!("bad weight '{x}': {e}"))))
                .collect()
        })
        .collect()
}

fn rep_value<F: Field>(m: &Representation<F>) -> Value {
    serde_json::to_value(RepresentationPayload::from_rep(m)).expect("payloads serialize")
}

fn subrep_value<F: Field>(s: &Subrep<F>) -> Value {
    json!({
        "dims": s.dims(),
        "basis": s.bases().iter().map(matrix_rows).collect::<Vec<_>>(),
    })
}

fn morphism_value<F: Field>(f: &Morphism<F>) -> Value {
    Value::Array(f.comps().iter().map(|c| json!(matrix_rows(c))).collect())
}

fn filtration_value<F: Field>(f: &Filtration<F>) -> Value {
    json!({
        "strict": f.strict,
        "steps": f.steps.iter().map(|s| s.dims()).collect::<Vec<_>>(),
        "quotient_dims": f.quotient_dims(),
    })
}

/// Map over `items` with `jobs` workers; worker `j` takes indices
/// `j, j + jobs, ...`, and results come back in input order.
fn par_map<T: Sync, R: Send>(items: &[T], jobs: usize, f: impl Fn(&T) -> Res<R> + Sync) -> Res<Vec<R>> {
    let jobs = jobs.clamp(1, items.len().max(1));
    if jobs == 1 {
        return items.iter().map(&f).collect();
    }
    let mut slots: Vec<Option<Res<R>>> = (0..items.len()).map(|_| None).collect();
    std::thread::scope(|s| {
        let f = &f;
        let handles: Vec<_> = (0..jobs)
            .map(|j| {
                s.spawn(move || {
                    items
                        .iter()
                        .enumerate()
                        .skip(j)
                        .step_by(jobs)
                        .map(|(i, x)| (i, f(x)))
                        .collect::<Vec<_>>()
                })
            })
            .collect();
        for h in handles {
            for (i, r) in h.join().expect("worker panicked") {
                slots[i] = Some(r);
            }
        }
    });
    slots.into_iter().map(|s| s.expect("every index visited")).collect()
}

pub fn execute(cli: &Cli, stdin: &mut dyn Read) -> Res<CommandOutput> {
    if let Some(f) = &cli.global.field {
        parse_field(f)?;
    }
    if cli.global.jobs == 0 {
        return Err(CliError::validation("--jobs must be at least 1"));
    }
    let mut ctx = Ctx {
        cli,
        stdin,
        stdin_used: false,
        inputs: BTreeMap::new(),
    };
    match &cli.command {
        Command::Ladder { src } => {
            let l = ctx.ladder(src)?;
            Ok(CommandOutput::ok(Document::new(Kind::Ladder, &LadderPayload::full(&l))))
        }
        Command::Projective { src, vertex } => {
            let l = ctx.ladder(src)?;
            let w = l
                .find_vertex(vertex)
                .ok_or_else(|| CliError::validation(format!("unknown vertex '{vertex}', expected one of {:?}", l.vertex_names())))?;
            let spec = ctx.field(&[])?;
            let doc = any_field!(spec, f => {
                let p = indecomposable_projective(&l, &f, w)?;
                Document::new(Kind::Representation, &RepresentationPayload::from_rep(&p))
            });
            Ok(CommandOutput::ok(doc))
        }
        Command::Check { rep } => {
            let rp = ctx.rep_payload("rep", rep)?;
            let spec = ctx.field(&[rp.field_spec()?])?;
            let result = any_field!(spec, f => {
                let m = rp.to_rep(&f)?;
                let relations = m.check_relations();
                json!({
                    "relations": relations,
                    "filtered": relations && m.is_filtered()?,
                    "dims": m.dims(),
                    "total_dim": m.total_dim(),
                })
            });
            Ok(CommandOutput::ok(ctx.report("check", Some(spec), &[], result)))
        }
        Command::Torsion { rep } => {
            let rp = ctx.rep_payload("rep", rep)?;
            let spec = ctx.field(&[rp.field_spec()?])?;
            let result = any_field!(spec, f => {
                let m = rp.to_rep(&f)?;
                json!({
                    "is_torsion": is_torsion(&m),
                    "torsion": subrep_value(&torsion_part(&m)?),
                    "torsion_free_quotient": rep_value(&kappa(&m)?),
                })
            });
            Ok(CommandOutput::ok(ctx.report("torsion", Some(spec), &[], result)))
        }
        Command::Kappa { rep, pres } => {
            let result_and_spec = if let Some(path) = rep {
                let rp = ctx.rep_payload("rep", path)?;
                let spec = ctx.field(&[rp.field_spec()?])?;
                let v = any_field!(spec, f => json!({ "kappa": rep_value(&kappa(&rp.to_rep(&f)?)?) }));
                (v, spec)
            } else {
                let path = pres.as_deref().expect("clap requires --rep or --pres");
                let pp = ctx.pres_payload("pres", path)?;
                let spec = ctx.field(&[pp.field_spec()?])?;
                let v = any_field!(spec, f => {
                    let (k, class) = kappa_presentation(&pp.to_presentation(&f)?)?;
                    json!({
                        "class": class.as_str(),
                        "presentation": PresentationPayload::from_presentation(&k),
                    })
                });
                (v, spec)
            };
            let (result, spec) = result_and_spec;
            Ok(CommandOutput::ok(ctx.report("kappa", Some(spec), &[], result)))
        }
        Command::Resolve { rep } => {
            let rp = ctx.rep_payload("rep", rep)?;
            let spec = ctx.field(&[rp.field_spec()?])?;
            let result = any_field!(spec, f => {
                let r = tf_resolution(&rp.to_rep(&f)?)?;
                json!({
                    "n": rep_value(&r.n),
                    "nprime": rep_value(&r.nprime),
                    "inclusion": morphism_value(&r.inclusion),
                    "f": morphism_value(&r.f),
                })
            });
            Ok(CommandOutput::ok(ctx.report("resolve", Some(spec), &[], result)))
        }
        Command::Stability {
            stab,
            rep,
            src,
            dims,
            locus: lc,
        } => {
            let sp = ctx.stab_payload(stab)?;
            match (rep, dims) {
                (Some(path), _) => stability_single(&mut ctx, &sp, path),
                (None, Some(dims)) => stability_sweep(&mut ctx, &sp, src, dims, *lc),
                (None, None) => Err(CliError::validation("stability needs --rep or --dims")),
            }
        }
        Command::Hn { rep, stab } => {
            let (m, p, spec) = finite_rep_and_params(&mut ctx, rep, stab, "hn")?;
            let convs = ctx.conventions(&p);
            let seed = (cli.global.seed != 0).then_some(cli.global.seed);
            let mut out = Vec::new();
            for &c in &convs {
                let pc = p.clone().with_convention(c);
                let hn = hn_filtration_seeded(&m, &pc, seed)?;
                let slopes: Vec<String> = hn.slopes(&pc)?.iter().map(|s| s.to_string()).collect();
                out.push(json!({
                    "convention": c.to_string(),
                    "filtration": filtration_value(&hn),
                    "slopes": slopes,
                }));
            }
            Ok(CommandOutput::ok(ctx.report("hn", Some(spec), &convs, json!({ "by_convention": out }))))
        }
        Command::Jh { rep, stab } => {
            let (m, p, spec) = finite_rep_and_params(&mut ctx, rep, stab, "jh")?;
            let convs = ctx.conventions(&p);
            let mut out = Vec::new();
            for &c in &convs {
                let pc = p.clone().with_convention(c);
                let entry = if !verdict(&m, &pc)?.semistable {
                    json!({ "convention": c.to_string(), "semistable": false, "jh": null })
                } else {
                    let jh = jh_filtration(&m, &pc)?;
                    let graded = jh.as_ref().map(gr).transpose()?;
                    json!({
                        "convention": c.to_string(),
                        "semistable": true,
                        "jh": jh.as_ref().map(filtration_value),
                        "gr": graded.as_ref().map(rep_value),
                    })
                };
                out.push(entry);
            }
            Ok(CommandOutput::ok(ctx.report("jh", Some(spec), &convs, json!({ "by_convention": out }))))
        }
        Command::Grmax { rep, stab } => {
            let rp = ctx.rep_payload("rep", rep)?;
            let spec = ctx.field(&[rp.field_spec()?])?;
            let f = prime(spec, "grmax")?;
            let m = rp.to_rep(&f)?;
            let entry = |p: Option<&StabilityParams>| -> Res<Value> {
                let flag = maximal_flag(&m, p)?;
                Ok(json!({ "flag": filtration_value(&flag), "gr": rep_value(&gr(&flag)?) }))
            };
            let (result, convs) = match stab {
                None => (entry(None)?, Vec::new()),
                Some(path) => {
                    let sp = ctx.stab_payload(path)?;
                    let p = ctx.params(&sp, m.ladder())?;
                    let convs = ctx.conventions(&p);
                    let mut out = Vec::new();
                    for &c in &convs {
                        let mut v = entry(Some(&p.clone().with_convention(c)))?;
                        v["convention"] = json!(c.to_string());
                        out.push(v);
                    }
                    (json!({ "by_convention": out }), convs)
                }
            };
            Ok(CommandOutput::ok(ctx.report("grmax", Some(spec), &convs, result)))
        }
        Command::Sequiv { rep, other, stab } => {
            let a = ctx.rep_payload("rep", rep)?;
            let b = ctx.rep_payload("other", other)?;
            let spec = ctx.field(&[a.field_spec()?, b.field_spec()?])?;
            let f = prime(spec, "sequiv")?;
            let (m, n) = (a.to_rep(&f)?, b.to_rep(&f)?);
            let (result, convs) = match stab {
                None => (json!({ "s_equivalent": s_equivalent(&m, &n, None)? }), Vec::new()),
                Some(path) => {
                    let sp = ctx.stab_payload(path)?;
                    let p = ctx.params(&sp, m.ladder())?;
                    let convs = ctx.conventions(&p);
                    let mut out = Vec::new();
                    for &c in &convs {
                        let pc = p.clone().with_convention(c);
                        out.push(json!({
                            "convention": c.to_string(),
                            "s_equivalent": s_equivalent(&m, &n, Some(&pc))?,
                            "sjh_equivalent": sjh_equivalent(&m, &n, &pc)?,
                        }));
                    }
                    (json!({ "by_convention": out }), convs)
                }
            };
            Ok(CommandOutput::ok(ctx.report("sequiv", Some(spec), &convs, result)))
        }
        Command::Pointtype { rep, stab } => {
            let (m, p, spec) = finite_rep_and_params(&mut ctx, rep, stab, "pointtype")?;
            let convs = ctx.conventions(&p);
            let mut out = Vec::new();
            for &c in &convs {
                let pc = p.clone().with_convention(c);
                let semistable = verdict(&m, &pc)?.semistable;
                out.push(if semistable {
                    json!({
                        "convention": c.to_string(),
                        "semistable": true,
                        "polystable": is_polystable(&m, &pc)?,
                        "type": classify_point_type(&m, &pc)?.as_str(),
                    })
                } else {
                    json!({ "convention": c.to_string(), "semistable": false, "polystable": false, "type": null })
                });
            }
            Ok(CommandOutput::ok(ctx.report("pointtype", Some(spec), &convs, json!({ "by_convention": out }))))
        }
        Command::Limit {
            rep,
            weights,
            locus: lc,
            stab,
        } => {
            let rp = ctx.rep_payload("rep", rep)?;
            let spec = ctx.field(&[rp.field_spec()?])?;
            let weights = parse_weights(weights)?;
            let sp = stab.as_deref().map(|s| ctx.stab_payload(s)).transpose()?;
            let result = any_field!(spec, f => {
                let m = rp.to_rep(&f)?;
                let ops = OnePS::diagonal(&f, weights.clone());
                let lim = ops_limit(&m, &ops, locus(*lc))?;
                let chain = match filtration_from_ops(&m, &ops) {
                    Ok(chain) => Some(chain.iter().map(|s| s.dims()).collect::<Vec<_>>()),
                    Err(filquiv::Error::Validation(_)) => None,
                    Err(e) => return Err(e.into()),
                };
                let pairing = match &sp {
                    Some(sp) => {
                        let p = ctx.params(sp, m.ladder())?;
                        Some(pairing_chi_lambda(&p.theta(m.dims()), &ops, m.dims())?)
                    }
                    None => None,
                };
                json!({
                    "locus": locus(*lc).to_string(),
                    "weights": weights,
                    "exists": lim.is_some(),
                    "limit": lim.as_ref().map(rep_value),
                    "filtration": chain,
                    "pairing": pairing,
                })
            });
            Ok(CommandOutput::ok(ctx.report("limit", Some(spec), &[], result)))
        }
        Command::Hm { rep, stab, locus: lc } => {
            let (m, p, spec) = finite_rep_and_params(&mut ctx, rep, stab, "hm")?;
            let convs = ctx.conventions(&p);
            let mut out = Vec::new();
            for &c in &convs {
                let v = hilbert_mumford_semistable(&m, &p.clone().with_convention(c), locus(*lc))?;
                out.push(json!({
                    "convention": c.to_string(),
                    "locus": locus(*lc).to_string(),
                    "semistable": v.semistable,
                    "checked": v.checked,
                    "witness": v.witness.map(|w| json!({
                        "weights": w.weights,
                        "basis": w.basis.iter().map(matrix_rows).collect::<Vec<_>>(),
                    })),
                }));
            }
            Ok(CommandOutput::ok(ctx.report("hm", Some(spec), &convs, json!({ "by_convention": out }))))
        }
        Command::Theta { rep, pres } => {
            let rp = ctx.rep_payload("rep", rep)?;
            let mut pps = Vec::new();
            for (i, path) in pres.iter().enumerate() {
                pps.push(ctx.pres_payload(&format!("pres{i}"), path)?);
            }
            let mut specs = vec![rp.field_spec()?];
            for pp in &pps {
                specs.push(pp.field_spec()?);
            }
            let spec = ctx.field(&specs)?;
            let result = any_field!(spec, f => {
                let m = rp.to_rep(&f)?;
                let gammas = pps.iter().map(|pp| pp.to_presentation(&f)).collect::<Res<Vec<_>>>()?;
                let values = theta_coordinates(&m, &gammas)?;
                json!({
                    "values": values.iter().map(|x| f.format(x)).collect::<Vec<_>>(),
                    "weights": gammas.iter().map(|g| g.weight()).collect::<Vec<_>>(),
                    "all_zero": values.iter().all(|x| f.is_zero(x)),
                })
            });
            Ok(CommandOutput::ok(ctx.report("theta", Some(spec), &[], result)))
        }
        Command::Certify {
            rep,
            stab,
            n_max,
            entry_degree,
            trials,
        } => {
            let rp = ctx.rep_payload("rep", rep)?;
            let sp = ctx.stab_payload(stab)?;
            let spec = ctx.field(&[rp.field_spec()?])?;
            let bounds = CertificateBounds {
                n_max: *n_max,
                entry_degree: *entry_degree,
                random_trials: *trials,
                seed: cli.global.seed,
                ..CertificateBounds::default()
            };
            let (out, convs, inconclusive) = any_field!(spec, f => {
                let m = rp.to_rep(&f)?;
                let p = ctx.params(&sp, m.ladder())?;
                let convs = ctx.conventions(&p);
                let mut out = Vec::new();
                let mut inconclusive = false;
                for &c in &convs {
                    match certificate_search(&m, &p.clone().with_convention(c), &bounds)? {
                        CertificateOutcome::Found { presentation, n, value } => out.push(json!({
                            "convention": c.to_string(),
                            "found": true,
                            "n": n,
                            "value": f.format(&value),
                            "presentation": PresentationPayload::from_presentation(&presentation),
                        })),
                        CertificateOutcome::Inconclusive { tried } => {
                            inconclusive = true;
                            out.push(json!({
                                "convention": c.to_string(),
                                "found": false,
                                "tried": tried.to_string(),
                            }));
                        }
                    }
                }
                (out, convs, inconclusive)
            });
            let doc = ctx.report("certify", Some(spec), &convs, json!({ "by_convention": out }));
            Ok(if inconclusive {
                CommandOutput {
                    code: EXIT_INCONCLUSIVE,
                    doc,
                    diagnostic: Some(CliError::new(
                        "inconclusive",
                        "no nonvanishing semi-invariant within the search bounds",
                        EXIT_INCONCLUSIVE,
                    )),
                }
            } else {
                CommandOutput::ok(doc)
            })
        }
        Command::Enumerate {
            src,
            dims,
            stab,
            locus: lc,
        } => enumerate(&mut ctx, src, dims, stab, *lc),
    }
}

fn finite_rep_and_params(
    ctx: &mut Ctx<'_>,
    rep: &str,
    stab: &str,
    command: &str,
) -> Res<(Representation<PrimeField>, StabilityParams, FieldSpec)> {
    let rp = ctx.rep_payload("rep", rep)?;
    let sp = ctx.stab_payload(stab)?;
    let spec = ctx.field(&[rp.field_spec()?])?;
    let f = prime(spec, command)?;
    let m = rp.to_rep(&f)?;
    let p = ctx.params(&sp, m.ladder())?;
    Ok((m, p, spec))
}

/// The subobject mode matching a criterion, for reporting a witness.
fn witness_mode(criterion: &str, p: &StabilityParams) -> SubMode {
    match criterion {
        "strict-slope" | "hilbert-mumford-fil" => SubMode::Strict,
        "hilbert-mumford-rel" => SubMode::All,
        _ => p.mode,
    }
}

fn stability_single(ctx: &mut Ctx<'_>, sp: &StabilityPayload, path: &str) -> Res<CommandOutput> {
    let rp = ctx.rep_payload("rep", path)?;
    let spec = ctx.field(&[rp.field_spec()?])?;
    let criterion = ctx.cli.global.criterion.clone();
    let (out, convs) = match spec {
        FieldSpec::Rationals => {
            if criterion != "slope" {
                return Err(CliError::validation(format!(
                    "criterion '{criterion}' needs a prime field; over q only 'slope' is decided (by reduction)"
                )));
            }
            let m = rp.to_rep(&Rationals)?;
            let p = ctx.params(sp, m.ladder())?;
            let convs = ctx.conventions(&p);
            let mut out = Vec::new();
            for &c in &convs {
                let v = rational_verdict(&m, &p.clone().with_convention(c))?;
                out.push(json!({
                    "convention": c.to_string(),
                    "semistable": v.semistable,
                    "stable": v.stable,
                    "reduction_primes": v.primes,
                }));
            }
            (out, convs)
        }
        FieldSpec::Prime(q) => {
            let f = PrimeField::new(q)?;
            let registry = CriterionRegistry::<PrimeField>::standard();
            let decide = registry.get(&criterion)?;
            let m = rp.to_rep(&f)?;
            let p = ctx.params(sp, m.ladder())?;
            let convs = ctx.conventions(&p);
            let mut out = Vec::new();
            for &c in &convs {
                let pc = p.clone().with_convention(c);
                let v = decide.decide(&m, &pc)?;
                let witness = if v.semistable {
                    None
                } else {
                    let wp = pc.clone().with_mode(witness_mode(&criterion, &pc));
                    verdict(&m, &wp)?.witness.as_ref().map(subrep_value)
                };
                out.push(json!({
                    "convention": c.to_string(),
                    "semistable": v.semistable,
                    "stable": v.stable,
                    "witness": witness,
                }));
            }
            (out, convs)
        }
    };
    Ok(CommandOutput::ok(ctx.report("stability", Some(spec), &convs, json!({ "by_convention": out }))))
}

type Points = (Arc<LadderQuiver>, Vec<Representation<PrimeField>>, FieldSpec, usize);

fn points_of(ctx: &mut Ctx<'_>, src: &LadderSource, dims: &str, lc: LocusArg, command: &str) -> Res<Points> {
    let l = ctx.ladder(src)?;
    let spec = ctx.field(&[])?;
    let f = prime(spec, command)?;
    let d = parse_usize_list(dims)?;
    if d.len() != l.num_vertices() {
        return Err(CliError::validation(format!("{} dimensions for {} vertices", d.len(), l.num_vertices())));
    }
    let all = enumerate_points(&l, &f, &d, ctx.cli.global.cap as u128)?;
    let total = all.len();
    let pts = match lc {
        LocusArg::Rel => all,
        LocusArg::Fil => {
            let mut keep = Vec::new();
            for m in all {
                if m.is_filtered()? {
                    keep.push(m);
                }
            }
            keep
        }
    };
    Ok((l, pts, spec, total))
}

fn stability_sweep(ctx: &mut Ctx<'_>, sp: &StabilityPayload, src: &LadderSource, dims: &str, lc: LocusArg) -> Res<CommandOutput> {
    let (l, pts, spec, _) = points_of(ctx, src, dims, lc, "stability")?;
    let criterion = ctx.cli.global.criterion.clone();
    let registry = CriterionRegistry::<PrimeField>::standard();
    let decide = registry.get(&criterion)?;
    let p = ctx.params(sp, &l)?;
    let convs = ctx.conventions(&p);
    let rows = par_map(&pts, ctx.cli.global.jobs, |m| {
        let filtered = m.is_filtered()?;
        let mut verdicts = Vec::new();
        for &c in &convs {
            let v = decide.decide(m, &p.clone().with_convention(c))?;
            verdicts.push((c, v.semistable, v.stable));
        }
        Ok((filtered, verdicts))
    })?;
    let mut summary = Vec::new();
    for (i, &c) in convs.iter().enumerate() {
        let semistable = rows.iter().filter(|r| r.1[i].1).count();
        let stable = rows.iter().filter(|r| r.1[i].2 == Some(true)).count();
        let iff = rows.iter().all(|r| r.1[i].1 == r.0);
        summary.push(json!({
            "convention": c.to_string(),
            "semistable": semistable,
            "stable": stable,
            "semistable_iff_filtered": iff,
        }));
    }
    let table: Vec<Value> = pts
        .iter()
        .zip(&rows)
        .map(|(m, (filtered, vs))| {
            json!({
                "maps": RepresentationPayload::from_rep(m).maps,
                "filtered": filtered,
                "verdicts": vs.iter().map(|(c, ss, st)| json!({
                    "convention": c.to_string(),
                    "semistable": ss,
                    "stable": st,
                })).collect::<Vec<_>>(),
            })
        })
        .collect();
    let result = json!({
        "locus": locus(lc).to_string(),
        "vertex_order": l.vertex_names(),
        "dims": parse_usize_list(dims)?,
        "points": pts.len(),
        "summary": summary,
        "table": table,
    });
    Ok(CommandOutput::ok(ctx.report("stability", Some(spec), &convs, result)))
}

fn enumerate(ctx: &mut Ctx<'_>, src: &LadderSource, dims: &str, stab: &str, lc: LocusArg) -> Res<CommandOutput> {
    let (l, pts, spec, relation_points) = points_of(ctx, src, dims, lc, "enumerate")?;
    let sp = ctx.stab_payload(stab)?;
    let p = ctx.params(&sp, &l)?;
    let convs = ctx.conventions(&p);
    let jobs = ctx.cli.global.jobs;
    let mut per = Vec::new();
    for &c in &convs {
        let pc = p.clone().with_convention(c);
        // graded object of the maximal flag of each semistable point
        let graded = par_map(&pts, jobs, |m| {
            Ok(if verdict(m, &pc)?.semistable {
                Some(gr_max(m, Some(&pc))?)
            } else {
                None
            })
        })?;
        let mut classes: Vec<(Representation<PrimeField>, usize)> = Vec::new();
        for g in graded.iter().flatten() {
            let mut hit = None;
            for (i, (r, _)) in classes.iter().enumerate() {
                if filquiv::rep::is_isomorphic(g, r)? {
                    hit = Some(i);
                    break;
                }
            }
            match hit {
                Some(i) => classes[i].1 += 1,
                None => classes.push((g.clone(), 1)),
            }
        }
        let mut out = Vec::new();
        for (g, count) in &classes {
            out.push(json!({
                "points": count,
                "graded": rep_value(g),
                "type": classify_point_type(g, &pc)?.as_str(),
            }));
        }
        per.push(json!({
            "convention": c.to_string(),
            "semistable": graded.iter().flatten().count(),
            "class_count": classes.len(),
            "classes": out,
        }));
    }
    let result = json!({
        "locus": locus(lc).to_string(),
        "vertex_order": l.vertex_names(),
        "dims": parse_usize_list(dims)?,
        "relation_points": relation_points,
        "points": pts.len(),
        "by_convention": per,
    });
    Ok(CommandOutput::ok(ctx.report("enumerate", Some(spec), &convs, result)))
}
