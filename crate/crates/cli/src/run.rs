use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use serde::de::DeserializeOwned;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use fibcat::fib::{
    is_cart_marked, is_discrete_fibration, is_equivalence, is_final, is_grothendieck_fibration,
    is_isofibration, is_marked_trivial_fibration, is_trivial_fibration, Verdict,
};
use fibcat::groth::{
    elements, marked_elements, path_object, t_marked, t_set, unit_discrete, unit_marked,
    verify_triangles_discrete, verify_triangles_marked, GrothError,
};
use fibcat::io::{
    marking_from_labels, CategoryJson, FunctorJson, IoError, MarkedSliceMap, Presheaf,
    PresheafJson, SSetJson, SliceMapJson,
};
use fibcat::laws::{find_law, registry, run_laws, Settings};
use fibcat::lke::{lke_cat, lke_set, verify_slice_extension, VerifyError};
use fibcat::model::{
    is_naive_fibrant, is_naive_fibration, is_weak_equivalence, verify_path_object, Kind, MarkedMap,
};
use fibcat::present::{localize, marked_pushout, pushout, Budget, PresentError};
use fibcat::random::Caps;
use fibcat::simplicial::{
    categorify_marked, generator_images, marked_nerve, nerve, ImageClass, MarkedTruncSSet,
    SimplicialError,
};
use fibcat::{FinCat, Functor, MarkedSlice, Marking, PresheafCat, SearchExhausted};

use crate::args::{CheckTarget, ConstructTarget, Inputs, KindArg, Options, Verb, VerifyTarget};
use crate::report::{InputDigest, Outcome, Report};

type R<T> = Result<T, Outcome>;

fn io_err(e: IoError) -> Outcome {
    match e {
        IoError::Parse(m) => Outcome::Parse(m),
        IoError::Invalid(m) => Outcome::Invalid(m),
    }
}

fn present_err(e: PresentError) -> Outcome {
    match &e {
        PresentError::Invalid(m) => Outcome::Invalid(m.clone()),
        _ => Outcome::Divergent(json!({
            "reason": e.to_string(),
            "certificate": e.certificate(),
        })),
    }
}

fn groth_err(e: GrothError) -> Outcome {
    match e {
        GrothError::Localization { object, error } => match present_err(error) {
            Outcome::Divergent(mut v) => {
                v["object"] = json!(object);
                Outcome::Divergent(v)
            }
            other => other,
        },
    }
}

fn exhausted(e: SearchExhausted) -> Outcome {
    Outcome::Divergent(json!({ "reason": e.to_string() }))
}

fn verdict(v: Verdict) -> Outcome {
    match v {
        Ok(()) => Outcome::Pass(Value::Null),
        Err(w) => Outcome::Fail(json!({ "witness": w })),
    }
}

struct Ctx<'a> {
    inputs: &'a Inputs,
    settings: Settings,
    digests: Vec<InputDigest>,
    summary: Vec<String>,
}

impl Ctx<'_> {
    fn budget(&self) -> Budget {
        self.settings.budget
    }

    fn nodes(&self) -> u64 {
        self.settings.max_nodes
    }

    fn kind(&self) -> Kind {
        match self.inputs.kind {
            Some(KindArg::Discrete) => Kind::Discrete,
            _ => Kind::Marked,
        }
    }

    fn read(&mut self, name: &str, path: &Option<PathBuf>) -> R<String> {
        let p = path
            .as_ref()
            .ok_or_else(|| Outcome::Parse(format!("missing --{name}")))?;
        let bytes = fs::read(p).map_err(|e| Outcome::Parse(format!("{}: {e}", p.display())))?;
        self.digests.push(InputDigest {
            name: name.into(),
            path: p.display().to_string(),
            sha256: hex::encode(Sha256::digest(&bytes)),
        });
        String::from_utf8(bytes).map_err(|e| Outcome::Parse(format!("{}: {e}", p.display())))
    }

    fn json<T: DeserializeOwned>(&mut self, name: &str, path: &Option<PathBuf>) -> R<T> {
        let text = self.read(name, path)?;
        fibcat::io::parse(&text).map_err(io_err)
    }

    fn functor_json(&mut self) -> R<FunctorJson> {
        let path = self.inputs.functor.clone();
        self.json("functor", &path)
    }

    fn functor(&mut self) -> R<Functor> {
        self.functor_json()?.to_functor().map_err(io_err)
    }

    fn marked_slice(&mut self) -> R<MarkedSlice> {
        self.functor_json()?.to_marked_slice().map_err(io_err)
    }

    fn slice_map(&mut self) -> R<MarkedSliceMap> {
        let path = self.inputs.map.clone();
        let m: SliceMapJson = self.json("map", &path)?;
        m.to_map().map_err(io_err)
    }

    /// `--cat`, marked by its own list or by `--marking`.
    fn marked_cat(&mut self) -> R<Marking> {
        let path = self.inputs.cat.clone();
        let cj: CategoryJson = self.json("cat", &path)?;
        let c = cj.to_cat().map_err(io_err)?;
        if self.inputs.marking.is_some() {
            let path = self.inputs.marking.clone();
            let labels: Vec<String> = self.json("marking", &path)?;
            return marking_from_labels(&c, &labels).map_err(io_err);
        }
        marking_from_labels(&c, cj.marked.as_deref().unwrap_or(&[])).map_err(io_err)
    }

    fn presheaf(&mut self) -> R<Presheaf> {
        let path = self.inputs.presheaf.clone();
        let pj: PresheafJson = self.json("presheaf", &path)?;
        pj.to_presheaf().map_err(io_err)
    }

    fn presheaf_cat(&mut self) -> R<PresheafCat> {
        Ok(match self.presheaf()? {
            Presheaf::Set(f) => PresheafCat::discrete(&f),
            Presheaf::Cat(f) => f,
        })
    }

    fn sset(&mut self) -> R<MarkedTruncSSet> {
        let path = self.inputs.sset.clone();
        let sj: SSetJson = self.json("sset", &path)?;
        sj.to_marked().map_err(io_err)
    }

    fn cat(&mut self, name: &str, path: &Option<PathBuf>) -> R<Arc<FinCat>> {
        let cj: CategoryJson = self.json(name, path)?;
        cj.to_cat().map_err(io_err)
    }

    /// Writes `value` to `--out` when given.
    fn emit<T: Serialize>(&self, value: &T) -> R<Value> {
        if let Some(p) = &self.inputs.out {
            write_file(p, &fibcat::io::render(value))?;
        }
        Ok(serde_json::to_value(value).expect("serializable"))
    }
}

fn write_file(p: &Path, text: &str) -> R<()> {
    fs::write(p, text).map_err(|e| Outcome::Invalid(format!("{}: {e}", p.display())))
}

fn same_base(a: &FinCat, b: &FinCat, what: &str) -> R<()> {
    if a == b {
        Ok(())
    } else {
        Err(Outcome::Invalid(format!("{what}: categories differ")))
    }
}

fn check(ctx: &mut Ctx, target: CheckTarget) -> R<Outcome> {
    use CheckTarget::*;
    Ok(match target {
        DiscreteFibration => verdict(is_discrete_fibration(&ctx.functor()?)),
        GrothendieckFibration => verdict(is_grothendieck_fibration(&ctx.functor()?)),
        Isofibration => verdict(is_isofibration(&ctx.functor()?)),
        Equivalence => verdict(is_equivalence(&ctx.functor()?)),
        TrivialFibration => verdict(is_trivial_fibration(&ctx.functor()?)),
        Final => verdict(is_final(&ctx.functor()?)),
        CartMarked => {
            let p = ctx.marked_slice()?;
            verdict(is_cart_marked(p.proj(), p.marking()))
        }
        MarkedTrivialFibration => {
            let fj = ctx.functor_json()?;
            let f = fj.to_functor().map_err(io_err)?;
            let labels = |c: &CategoryJson| c.marked.clone().unwrap_or_default();
            let src = marking_from_labels(f.dom(), &labels(&fj.dom)).map_err(io_err)?;
            let tgt = marking_from_labels(f.cod(), &labels(&fj.cod)).map_err(io_err)?;
            verdict(is_marked_trivial_fibration(&f, &src, &tgt))
        }
        NaiveFibration => {
            let kind = ctx.kind();
            let r = if ctx.inputs.map.is_some() {
                let m = ctx.slice_map()?;
                let mm = MarkedMap {
                    functor: m.functor.clone(),
                    src: m.src.marking().clone(),
                    tgt: m.tgt.marking().clone(),
                };
                is_naive_fibration(kind, &mm, m.src.proj(), m.tgt.proj(), ctx.nodes())
            } else {
                is_naive_fibrant(kind, &ctx.marked_slice()?, ctx.nodes())
            };
            match r.map_err(exhausted)? {
                Ok(()) => Outcome::Pass(json!({ "kind": kind })),
                Err(w) => Outcome::Fail(json!({ "kind": kind, "witness": w })),
            }
        }
        WeakEquivalence => {
            let kind = ctx.kind();
            let m = ctx.slice_map()?;
            let mm = MarkedMap {
                functor: m.functor.clone(),
                src: m.src.marking().clone(),
                tgt: m.tgt.marking().clone(),
            };
            let r =
                is_weak_equivalence(kind, &mm, &m.src, &m.tgt, ctx.budget()).map_err(groth_err)?;
            let v = json!({ "kind": kind, "detail": r.detail });
            if r.weak_equivalence {
                Outcome::Pass(v)
            } else {
                Outcome::Fail(v)
            }
        }
    })
}

fn construct(ctx: &mut Ctx, target: ConstructTarget) -> R<Outcome> {
    use ConstructTarget::*;
    let budget = ctx.budget();
    Ok(match target {
        Elements => match ctx.presheaf()? {
            Presheaf::Set(f) => {
                let el = elements(&f);
                Outcome::Pass(ctx.emit(&FunctorJson::from_functor(el.proj()))?)
            }
            Presheaf::Cat(_) => {
                return Err(Outcome::Invalid(
                    "presheaf of categories: use marked-elements".into(),
                ))
            }
        },
        MarkedElements => {
            let el = marked_elements(&ctx.presheaf_cat()?);
            Outcome::Pass(ctx.emit(&FunctorJson::from_marked_slice(&el.slice))?)
        }
        TSet => {
            let t = t_set(&ctx.functor()?);
            Outcome::Pass(ctx.emit(&PresheafJson::from_set(&t.presheaf))?)
        }
        TMarked => {
            let t = t_marked(&ctx.marked_slice()?, budget).map_err(groth_err)?;
            Outcome::Pass(ctx.emit(&PresheafJson::from_cat(&t.presheaf))?)
        }
        PathObject => {
            let p = ctx.marked_slice()?;
            match path_object(&p) {
                Err(w) => Outcome::Fail(json!({ "not_fibrant": w })),
                Ok(po) => {
                    let out = json!({
                        "path": FunctorJson::from_marked_slice(&po.path),
                        "first": FunctorJson::from_functor(&po.first),
                        "second": FunctorJson::from_functor(&po.second),
                    });
                    let v = ctx.emit(&out)?;
                    if po.holds() {
                        Outcome::Pass(v)
                    } else {
                        Outcome::Fail(json!({ "object": v, "checks": path_checks(&po) }))
                    }
                }
            }
        }
        Factorize => {
            let fac = unit_discrete(&ctx.functor()?);
            let out = json!({
                "elements": FunctorJson::from_functor(fac.elements.proj()),
                "unit": FunctorJson::from_functor(&fac.unit),
                "unit_is_iso": fac.unit_is_iso,
            });
            let v = ctx.emit(&out)?;
            match (&fac.unit_final, &fac.second_leg_discrete) {
                (Ok(()), Ok(())) => Outcome::Pass(v),
                (a, b) => Outcome::Fail(json!({
                    "unit_final": a.as_ref().err(),
                    "second_leg_discrete": b.as_ref().err(),
                })),
            }
        }
        Localize => {
            let m = ctx.marked_cat()?;
            let loc = localize(&m, budget).map_err(present_err)?;
            let out = json!({
                "category": CategoryJson::from_cat(loc.cat()),
                "gamma": FunctorJson::from_functor(&loc.gamma),
            });
            Outcome::Pass(ctx.emit(&out)?)
        }
        Pushout => {
            let (lp, rp) = (ctx.inputs.left.clone(), ctx.inputs.right.clone());
            let lj: FunctorJson = ctx.json("left", &lp)?;
            let rj: FunctorJson = ctx.json("right", &rp)?;
            let f = lj.to_functor().map_err(io_err)?;
            let g = rj.to_functor().map_err(io_err)?;
            same_base(f.dom(), g.dom(), "span legs have different domains")?;
            let g = g.with_dom(f.dom().clone());
            let po = match (&lj.cod.marked, &rj.cod.marked) {
                (Some(a), Some(b)) => {
                    let ma = marking_from_labels(f.cod(), a).map_err(io_err)?;
                    let mb = marking_from_labels(g.cod(), b).map_err(io_err)?;
                    marked_pushout(&f, &ma, &g, &mb, budget)
                }
                _ => pushout(&f, &g, budget),
            }
            .map_err(present_err)?;
            let category = match &po.marking {
                Some(m) => CategoryJson::from_marked(m),
                None => CategoryJson::from_cat(&po.cat),
            };
            let out = json!({
                "category": category,
                "left": FunctorJson::from_functor(&po.left),
                "right": FunctorJson::from_functor(&po.right),
            });
            Outcome::Pass(ctx.emit(&out)?)
        }
        Lke => {
            let f = ctx.presheaf()?;
            let sigma = ctx.functor()?;
            match f {
                Presheaf::Set(f) => {
                    same_base(f.base(), sigma.dom(), "presheaf base and functor domain")?;
                    let sigma = sigma.with_dom(f.base().clone());
                    let ext = lke_set(&f, &sigma);
                    Outcome::Pass(ctx.emit(&PresheafJson::from_set(&ext.presheaf))?)
                }
                Presheaf::Cat(f) => {
                    same_base(f.base(), sigma.dom(), "presheaf base and functor domain")?;
                    let sigma = sigma.with_dom(f.base().clone());
                    let ext = lke_cat(&f, &sigma, budget).map_err(present_err)?;
                    Outcome::Pass(ctx.emit(&PresheafJson::from_cat(&ext.presheaf))?)
                }
            }
        }
        Nerve => {
            let m = ctx.marked_cat()?;
            let x = marked_nerve(&nerve(m.carrier()), &m);
            Outcome::Pass(ctx.emit(&SSetJson::from_marked(&x))?)
        }
        Categorify => {
            let x = ctx.sset()?;
            let (_, m) = categorify_marked(&x, budget).map_err(present_err)?;
            Outcome::Pass(ctx.emit(&CategoryJson::from_marked(&m))?)
        }
    })
}

fn path_checks(po: &fibcat::groth::PathObject) -> Value {
    json!({
        "first_is_equivalence": po.first_is_equivalence.as_ref().err(),
        "second_is_isofibration": po.second_is_isofibration.as_ref().err(),
        "path_is_fibrant": po.path_is_fibrant.as_ref().err(),
        "legs_are_marked": po.legs_are_marked.as_ref().err(),
        "composite_is_diagonal": po.composite_is_diagonal,
    })
}

fn simplicial_err(e: SimplicialError) -> Outcome {
    match e {
        SimplicialError::Present(e) => present_err(e),
        SimplicialError::Search(e) => exhausted(e),
    }
}

fn verify(ctx: &mut Ctx, target: VerifyTarget) -> R<Outcome> {
    use VerifyTarget::*;
    let budget = ctx.budget();
    let pass_if = |ok: bool, v: Value| {
        if ok {
            Outcome::Pass(v)
        } else {
            Outcome::Fail(v)
        }
    };
    Ok(match target {
        TrianglesDiscrete => {
            let p = ctx.functor()?;
            let f = match ctx.presheaf()? {
                Presheaf::Set(f) => f,
                Presheaf::Cat(_) => {
                    return Err(Outcome::Invalid("expected a presheaf of sets".into()))
                }
            };
            same_base(p.cod(), f.base(), "slice base and presheaf base")?;
            let w = verify_triangles_discrete(&p, &f);
            pass_if(w.holds(), json!(w))
        }
        TrianglesMarked => {
            let p = ctx.marked_slice()?;
            let f = ctx.presheaf_cat()?;
            same_base(p.base(), f.base(), "slice base and presheaf base")?;
            let w = verify_triangles_marked(&p, &f, budget).map_err(groth_err)?;
            pass_if(w.holds(), json!(w))
        }
        SliceExtension => {
            let sigma = ctx.functor()?;
            let r = verify_slice_extension(&sigma, budget, ctx.nodes()).map_err(|e| match e {
                VerifyError::Present(e) => present_err(e),
                VerifyError::Search(e) => exhausted(e),
                VerifyError::NotOrdinal => Outcome::Invalid(e.to_string()),
            })?;
            pass_if(r.holds(), json!(r))
        }
        PathObject => {
            let p = ctx.marked_slice()?;
            match verify_path_object(&p, ctx.nodes()).map_err(exhausted)? {
                Err(w) => Outcome::Fail(json!({ "not_fibrant": w })),
                Ok(r) => {
                    let mut checks = path_checks(&r.path);
                    checks["second_leg_lifting"] = json!(r.second_leg_naive.as_ref().err());
                    pass_if(r.holds(), checks)
                }
            }
        }
        GeneratorImages => {
            let kind = ctx.kind();
            let path = ctx.inputs.base.clone();
            let base = ctx.cat("base", &path)?;
            let g = generator_images(kind, &base, budget, ctx.nodes()).map_err(simplicial_err)?;
            let ok = g.rows.iter().all(|r| r.class != ImageClass::Unclassified);
            ctx.summary = g
                .summary
                .iter()
                .map(|(shape, classes)| format!("{shape}: {}", classes.join("; ")))
                .collect();
            pass_if(ok, json!(g))
        }
        UnitEquivalence => {
            let p = ctx.marked_slice()?;
            let u = unit_marked(&p, budget).map_err(groth_err)?;
            let fibrant = fibcat::fib::is_cart_marked_fibration(p.proj(), p.marking()).is_ok();
            let eq = is_equivalence(&u.unit);
            let v = json!({
                "input_fibrant": fibrant,
                "preserves_marking": u.preserves_marking.as_ref().err(),
                "equivalence": eq.as_ref().err(),
            });
            pass_if(u.preserves_marking.is_ok() && eq.is_ok(), v)
        }
    })
}

fn fuzz(ctx: &mut Ctx, law: &str, seed: u64, cases: u64) -> R<Outcome> {
    let laws = if law == "all" {
        registry()
    } else {
        match find_law(law) {
            Some(l) => vec![l],
            None => {
                let names: Vec<&str> = registry().iter().map(|l| l.name).collect();
                return Err(Outcome::Invalid(format!(
                    "unknown law `{law}`; known laws: all, {}",
                    names.join(", ")
                )));
            }
        }
    };
    let report = run_laws(&laws, seed, cases, &ctx.settings);
    ctx.summary = report
        .laws
        .iter()
        .map(|l| {
            format!(
                "{} [{}]: {} passed, {} skipped, {} failed of {}",
                l.law, l.module, l.passed, l.skipped, l.failed, l.cases
            )
        })
        .collect();
    let ok = report.laws.iter().all(|l| l.holds());
    let v = json!(report);
    Ok(if ok {
        Outcome::Pass(v)
    } else {
        Outcome::Fail(v)
    })
}

fn list_laws(ctx: &mut Ctx) -> Outcome {
    let laws = registry();
    ctx.summary = laws
        .iter()
        .map(|l| format!("{} [{}]: {}", l.name, l.module, l.statement))
        .collect();
    Outcome::Pass(json!(laws
        .iter()
        .map(|l| json!({ "name": l.name, "module": l.module, "statement": l.statement }))
        .collect::<Vec<_>>()))
}

fn settings(o: &Options) -> Settings {
    Settings {
        caps: Caps {
            max_objects: o.max_objects,
            max_morphisms: o.max_morphisms,
        },
        max_nodes: o.search_nodes,
        budget: Budget {
            rewrite_steps: o.rewrite_steps,
            ..Budget::default()
        },
    }
}

fn target_name<T: clap::ValueEnum>(t: &T) -> String {
    t.to_possible_value()
        .expect("no skipped variants")
        .get_name()
        .to_string()
}

pub fn run(verb: &Verb, opts: &Options) -> Report {
    let empty = Inputs::default();
    let inputs = match verb {
        Verb::Check { inputs, .. }
        | Verb::Construct { inputs, .. }
        | Verb::Verify { inputs, .. } => inputs,
        Verb::Fuzz { .. } | Verb::Laws => &empty,
    };
    let mut ctx = Ctx {
        inputs,
        settings: settings(opts),
        digests: Vec::new(),
        summary: Vec::new(),
    };
    let (command, result) = match verb {
        Verb::Check { target, .. } => (
            format!("check {}", target_name(target)),
            check(&mut ctx, *target),
        ),
        Verb::Construct { target, .. } => (
            format!("construct {}", target_name(target)),
            construct(&mut ctx, *target),
        ),
        Verb::Verify { target, .. } => (
            format!("verify {}", target_name(target)),
            verify(&mut ctx, *target),
        ),
        Verb::Fuzz { law } => (
            format!("fuzz {law}"),
            fuzz(&mut ctx, law, opts.seed, opts.cases),
        ),
        Verb::Laws => ("laws".to_string(), Ok(list_laws(&mut ctx))),
    };
    let outcome = result.unwrap_or_else(|o| o);
    let mut report = Report::new(command, ctx.digests, outcome);
    report.summary = ctx.summary;
    report
}

pub fn exit_code(report: &Report) -> i32 {
    use crate::report::Status;
    match (report.status, report.error.as_ref().map(|e| e.kind)) {
        (Status::Pass, _) => 0,
        (Status::Fail, _) => 1,
        (Status::Error, Some("parse")) => 2,
        (Status::Error, _) => 3,
        (Status::Divergent, _) => 4,
    }
}
