//! The subcommands, each rendering a deterministic text, JSON or DOT output.

use std::fmt::Write as _;

use serde::Serialize;

use hcw_core::conic::ConicComplex;
use hcw_core::exactla::{Field, FieldSpec};
use hcw_core::gradedcomplex::{minimize, taylor_complex, GradedFreeComplex};
use hcw_core::hcw::{compare_conic, hcwify};
use hcw_core::incidence::{conic_iso_check, incidence_poset, verify_mfr_support};
use hcw_core::minsupport::{make_minimal_support_basis, verify_minimal_support, BasisChangeLog};
use hcw_core::monomials::{MonomialIdeal, Multidegree};
use hcw_core::posets::Poset;
use hcw_core::rigidity::{betti_poset, check_rigid_iff_hcw, RigidityViolation};
use hcw_core::with_field;

use crate::error::{CliError, CliResult};
use crate::input::Input;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Summary,
    Json,
    Dot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Command {
    Resolve,
    Betti,
    Minbasis,
    Incidence,
    Conic,
    Hcwify,
    Verify,
    Rigid,
    BettiPoset,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Options {
    /// Field characteristic; complex files default to their own, everything
    /// else to 0.
    pub characteristic: Option<u64>,
    pub format: Format,
}

/// Rendered output plus the number of failed checks, which decides the
/// exit status.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub text: String,
    pub failed: usize,
}

impl Output {
    fn ok(text: String) -> Self {
        Self { text, failed: 0 }
    }
}

enum Source<F: Field> {
    Ideal(MonomialIdeal),
    Complex(GradedFreeComplex<F>),
    Poset(Poset),
}

struct Ctx<F: Field> {
    field: F,
    names: Vec<String>,
    source: Source<F>,
}

pub fn run(command: Command, input: &Input, options: &Options) -> CliResult<Output> {
    let file_char = match input {
        Input::Complex(c) => Some(c.characteristic),
        _ => None,
    };
    let characteristic = match (options.characteristic, file_char) {
        (Some(c), Some(f)) if c != f => {
            return Err(CliError::Parse(format!(
                "complex file is over characteristic {f} but --char {c} was given"
            )))
        }
        (Some(c), _) => c,
        (None, Some(f)) => f,
        (None, None) => 0,
    };
    let spec = FieldSpec::new(characteristic).map_err(CliError::from_core)?;
    with_field!(spec, f => run_in(command, input, options.format, f))?
}

fn run_in<F: Field>(command: Command, input: &Input, format: Format, field: F) -> CliResult<Output> {
    let (names, source) = match input {
        Input::Ideal(file) => (file.variables.clone(), Source::Ideal(file.ideal.clone())),
        Input::Complex(json) => {
            let c = GradedFreeComplex::from_json(field.clone(), json)?;
            let names = json
                .variables
                .clone()
                .unwrap_or_else(|| (1..=json.num_vars).map(|i| format!("x{i}")).collect());
            (names, Source::Complex(c))
        }
        Input::Poset(json) => (Vec::new(), Source::Poset(Poset::from_json(json)?)),
    };
    let ctx = Ctx { field, names, source };
    if format == Format::Dot && !matches!(command, Command::Incidence | Command::Hcwify | Command::BettiPoset) {
        return Err(CliError::Parse(
            "DOT output is only available for poset commands".into(),
        ));
    }
    match command {
        Command::Resolve => resolve(&ctx, format),
        Command::Betti => betti(&ctx, format),
        Command::Minbasis => minbasis(&ctx, format),
        Command::Incidence => incidence(&ctx, format),
        Command::Conic => conic(&ctx, format),
        Command::Hcwify => hcwify_cmd(&ctx, format),
        Command::Verify => verify(&ctx, format),
        Command::Rigid => rigid(&ctx, format),
        Command::BettiPoset => betti_poset_cmd(&ctx, format),
    }
}

fn json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn join<T: ToString>(v: impl IntoIterator<Item = T>) -> String {
    v.into_iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")
}

fn square_zero_failure(e: hcw_core::Error) -> CliError {
    CliError::Verification(format!("complex: ∂∘∂ ≠ 0 ({e})"))
}

impl<F: Field> Ctx<F> {
    fn mono(&self, d: &Multidegree) -> String {
        d.display_with(&self.names).to_string()
    }

    fn ideal(&self) -> CliResult<MonomialIdeal> {
        match &self.source {
            Source::Ideal(i) => Ok(i.clone()),
            Source::Complex(c) => Ok(c.resolved_ideal()?),
            Source::Poset(_) => Err(CliError::Parse("this command needs an ideal or a complex".into())),
        }
    }

    /// Minimal resolution: computed from an ideal, or a complex file checked
    /// to be a resolution and minimized if needed.
    fn minimal(&self) -> CliResult<GradedFreeComplex<F>> {
        match &self.source {
            Source::Ideal(i) => Ok(minimize(&taylor_complex(i, self.field.clone())?)?),
            Source::Complex(c) => {
                c.check_complex().map_err(square_zero_failure)?;
                let report = c.is_resolution()?;
                if let Some(f) = report.failures.first() {
                    return Err(CliError::Verification(format!(
                        "resolution: strand at {} has homology {:?}",
                        f.degree, f.homology
                    )));
                }
                if c.is_minimal() {
                    Ok(c.clone())
                } else {
                    Ok(minimize(c)?)
                }
            }
            Source::Poset(_) => Err(CliError::Parse("this command needs an ideal or a complex".into())),
        }
    }

    fn basis(&self) -> CliResult<(GradedFreeComplex<F>, BasisChangeLog)> {
        Ok(make_minimal_support_basis(&self.minimal()?)?)
    }

    fn poset(&self) -> CliResult<Poset> {
        match &self.source {
            Source::Poset(p) => Ok(p.clone()),
            _ => Ok(incidence_poset(&self.basis()?.0)?.poset),
        }
    }

    fn with_names(&self, c: &GradedFreeComplex<F>) -> hcw_core::gradedcomplex::ComplexJson {
        let mut j = c.to_json();
        j.variables = Some(self.names.clone());
        j
    }
}

fn resolve<F: Field>(ctx: &Ctx<F>, format: Format) -> CliResult<Output> {
    let m = ctx.minimal()?;
    if format == Format::Json {
        return Ok(Output::ok(json(&ctx.with_names(&m))));
    }
    let table = m.betti_table()?;
    let mut s = String::new();
    let _ = writeln!(s, "characteristic: {}", ctx.field.characteristic());
    let _ = writeln!(s, "variables: {}", ctx.names.join(" "));
    let _ = writeln!(
        s,
        "generators: {}",
        join(m.basis(0).iter().map(|l| ctx.mono(&l.degree)))
    );
    let _ = writeln!(s, "ranks: {}", join(m.ranks()));
    let _ = writeln!(s, "betti: {}", join(table.totals()));
    let _ = writeln!(s, "minimal: {}", m.is_minimal());
    Ok(Output::ok(s))
}

fn betti<F: Field>(ctx: &Ctx<F>, format: Format) -> CliResult<Output> {
    let table = ctx.minimal()?.betti_table()?;
    if format == Format::Json {
        return Ok(Output::ok(json(&table.to_json())));
    }
    let mut s = String::new();
    let _ = writeln!(s, "betti: {}", join(table.totals()));
    for (i, d, b) in table.entries() {
        let _ = writeln!(s, "beta {i} {}: {b}", ctx.mono(d));
    }
    Ok(Output::ok(s))
}

#[derive(Serialize)]
struct MinbasisJson {
    complex: hcw_core::gradedcomplex::ComplexJson,
    log: BasisChangeLog,
}

fn minbasis<F: Field>(ctx: &Ctx<F>, format: Format) -> CliResult<Output> {
    let (basis, log) = ctx.basis()?;
    verify_minimal_support(&basis)?;
    if format == Format::Json {
        return Ok(Output::ok(json(&MinbasisJson {
            complex: ctx.with_names(&basis),
            log,
        })));
    }
    let mut s = String::new();
    let _ = writeln!(s, "basis_changes: {}", log.len());
    for step in &log.steps {
        let _ = writeln!(
            s,
            "replaced: {} in degree {} (support {} -> {})",
            step.replaced_id,
            step.degree,
            step.support_before.len(),
            step.support_after.len()
        );
    }
    for n in 1..basis.num_degrees() {
        for l in basis.basis(n) {
            let supp = hcw_core::minsupport::boundary_support(&basis, l.id)?;
            let _ = writeln!(s, "support {}: {}", l.id, supp.len());
        }
    }
    let _ = writeln!(s, "minimal_support: true");
    Ok(Output::ok(s))
}

fn poset_summary<F: Field>(p: &Poset, field: &F, s: &mut String) -> CliResult<()> {
    let _ = writeln!(s, "elements: {}", p.len());
    let _ = writeln!(s, "covers: {}", p.covers().len());
    let mut per_dim = Vec::new();
    for &d in p.dims() {
        if per_dim.len() <= d {
            per_dim.resize(d + 1, 0);
        }
        per_dim[d] += 1;
    }
    let _ = writeln!(s, "elements_by_dim: {}", join(per_dim));
    match p.first_non_sphere(field)? {
        Some(a) => {
            let h = p.lower_order_complex(a)?.reduced_homology(field);
            let _ = writeln!(s, "hcw: false");
            let _ = writeln!(
                s,
                "non_sphere: {} (reduced homology from dim -1: {})",
                p.label(a),
                join(&h.betti)
            );
        }
        None => {
            let _ = writeln!(s, "hcw: true");
        }
    }
    Ok(())
}

fn incidence<F: Field>(ctx: &Ctx<F>, format: Format) -> CliResult<Output> {
    let p = incidence_poset(&ctx.basis()?.0)?.poset;
    match format {
        Format::Json => Ok(Output::ok(json(&p.to_json()))),
        Format::Dot => Ok(Output::ok(p.to_dot(&[]))),
        Format::Summary => {
            let mut s = String::new();
            poset_summary(&p, &ctx.field, &mut s)?;
            Ok(Output::ok(s))
        }
    }
}

#[derive(Serialize)]
struct ConicJson {
    ranks: Vec<usize>,
    components: Vec<ComponentJson>,
    supports_resolution: Option<bool>,
}

#[derive(Serialize)]
struct ComponentJson {
    apex: String,
    dim: usize,
    rank: usize,
}

fn conic<F: Field>(ctx: &Ctx<F>, format: Format) -> CliResult<Output> {
    let p = ctx.poset()?;
    let c = ConicComplex::new(&p, ctx.field.clone())?;
    c.complex().check_square_zero()?;
    let supports = match p.degrees() {
        Some(deg) => Some(c.supports_resolution(deg)?.is_resolution),
        None => None,
    };
    if format == Format::Json {
        let components = c
            .components()
            .iter()
            .map(|k| ComponentJson {
                apex: p.label(k.apex).to_string(),
                dim: k.dim,
                rank: k.rank(),
            })
            .collect();
        return Ok(Output::ok(json(&ConicJson {
            ranks: c.ranks(),
            components,
            supports_resolution: supports,
        })));
    }
    let mut s = String::new();
    let _ = writeln!(s, "ranks: {}", join(c.ranks()));
    let _ = writeln!(s, "square_zero: true");
    for k in c.components() {
        if k.rank() != 1 {
            let _ = writeln!(s, "summand {}: rank {}", p.label(k.apex), k.rank());
        }
    }
    if let Some(b) = supports {
        let _ = writeln!(s, "supports_resolution: {b}");
    }
    Ok(Output::ok(s))
}

fn hcwify_cmd<F: Field>(ctx: &Ctx<F>, format: Format) -> CliResult<Output> {
    let p = ctx.poset()?;
    let (q, report) = hcwify(&p, &ctx.field)?;
    let verdicts = hcw_verdicts(&p, &q, ctx)?;
    match format {
        Format::Json => Ok(Output::ok(json(&report))),
        Format::Dot => {
            let added: Vec<(usize, usize)> = report
                .added
                .iter()
                .map(|r| {
                    (
                        q.index_of(&r.lower).expect("label"),
                        q.index_of(&r.upper).expect("label"),
                    )
                })
                .collect();
            Ok(Output::ok(q.to_dot(&added)))
        }
        Format::Summary => {
            let mut s = String::new();
            let _ = writeln!(s, "elements: {}", q.len());
            let _ = writeln!(s, "added_relations: {}", report.added.len());
            for r in &report.added {
                let _ = writeln!(s, "added: {} < {} (level {})", r.lower, r.upper, r.level);
            }
            for (name, ok) in &verdicts {
                let _ = writeln!(s, "{name}: {ok}");
            }
            Ok(Output::ok(s))
        }
    }
}

fn hcw_verdicts<F: Field>(p: &Poset, q: &Poset, ctx: &Ctx<F>) -> CliResult<Vec<(&'static str, bool)>> {
    let hcw = q.is_hcw(&ctx.field)?;
    let conic_q = ConicComplex::new(q, ctx.field.clone())?;
    let unchanged = compare_conic(&ConicComplex::new(p, ctx.field.clone())?, &conic_q).is_ok();
    let mut out = vec![("hcw", hcw), ("conic_unchanged", unchanged)];
    if let Some(deg) = q.degrees() {
        out.push(("supports_resolution", conic_q.supports_resolution(deg)?.is_resolution));
    }
    if !out.iter().all(|(_, ok)| *ok) {
        let failed: Vec<&str> = out.iter().filter(|(_, ok)| !ok).map(|(n, _)| *n).collect();
        return Err(CliError::Verification(failed.join(", ")));
    }
    Ok(out)
}

/// Collects named pass/fail lines.
#[derive(Default)]
struct Checks {
    text: String,
    failed: usize,
}

impl Checks {
    fn record(&mut self, name: &str, result: CliResult<()>) -> bool {
        match result {
            Ok(()) => {
                let _ = writeln!(self.text, "{name}: pass");
                true
            }
            Err(e) => {
                self.failed += 1;
                let _ = writeln!(self.text, "{name}: FAIL ({e})");
                false
            }
        }
    }

    fn info(&mut self, name: &str, value: impl std::fmt::Display) {
        let _ = writeln!(self.text, "{name}: {value}");
    }
}

fn check(ok: bool, message: &str) -> CliResult<()> {
    if ok {
        Ok(())
    } else {
        Err(CliError::Verification(message.to_string()))
    }
}

fn verify<F: Field>(ctx: &Ctx<F>, format: Format) -> CliResult<Output> {
    let mut c = Checks::default();
    if let Source::Complex(complex) = &ctx.source {
        if let Err(e) = complex.check_complex() {
            c.failed += 1;
            let _ = writeln!(c.text, "complex: ∂∘∂ ≠ 0 ({e})");
            return Ok(finish(c, format));
        }
        c.record("complex", Ok(()));
    }
    match &ctx.source {
        Source::Poset(p) => verify_poset(ctx, p, &mut c)?,
        _ => verify_resolution(ctx, &mut c)?,
    }
    Ok(finish(c, format))
}

#[derive(Serialize)]
struct VerifyJson {
    lines: Vec<String>,
    failed_checks: usize,
}

fn finish(mut c: Checks, format: Format) -> Output {
    c.info("failed_checks", c.failed);
    let text = if format == Format::Json {
        json(&VerifyJson {
            lines: c.text.lines().map(str::to_string).collect(),
            failed_checks: c.failed,
        })
    } else {
        c.text
    };
    Output { text, failed: c.failed }
}

fn verify_resolution<F: Field>(ctx: &Ctx<F>, c: &mut Checks) -> CliResult<()> {
    let m = match ctx.minimal() {
        Ok(m) => m,
        Err(CliError::Verification(e)) => {
            c.record("resolution", Err(CliError::Verification(e)));
            return Ok(());
        }
        Err(e) => return Err(e),
    };
    c.record(
        "resolution",
        check(m.is_resolution()?.is_resolution, "minimal complex is not exact"),
    );
    c.record("minimal", check(m.is_minimal(), "unit entry"));
    c.info("betti", join(m.betti_table()?.totals()));

    if let Source::Complex(given) = &ctx.source {
        if given.is_minimal() {
            c.record(
                "given_basis_minimal_support",
                verify_minimal_support(given).map_err(CliError::from),
            );
        }
    }
    let (basis, log) = make_minimal_support_basis(&m)?;
    c.record(
        "minimal_support",
        verify_minimal_support(&basis).map_err(CliError::from).and_then(|()| {
            check(
                log.replay(&m)?.to_json() == basis.to_json(),
                "basis log does not replay",
            )
        }),
    );
    let inc = incidence_poset(&basis)?;
    c.record(
        "conic_iso",
        conic_iso_check(&basis, &inc).map(|_| ()).map_err(CliError::from),
    );
    c.record(
        "support",
        verify_mfr_support(&basis).map(|_| ()).map_err(CliError::from),
    );

    match hcwify(&inc.poset, &ctx.field) {
        Ok((q, report)) => {
            c.info("added_relations", report.added.len());
            let hcw_ok = q.is_hcw(&ctx.field)?;
            c.info("hcw", hcw_ok);
            c.record("hcwify", check(hcw_ok, "result is not hcw"));
            let conic = ConicComplex::new(&q, ctx.field.clone())?;
            let deg = q.degrees().expect("incidence poset has degrees");
            let supported = conic.homogenize(deg)?.complex;
            c.record(
                "hcw_support",
                check(
                    supported.is_resolution()?.is_resolution && supported.betti_table()? == m.betti_table()?,
                    "homogenized conic complex is not a minimal resolution",
                ),
            );
            c.record("conic_invariants", conic_invariants(&conic, deg));
        }
        Err(e) => {
            c.record("hcwify", Err(e.into()));
        }
    }

    let ideal = ctx.ideal()?;
    let r = check_rigid_iff_hcw(&ideal, &ctx.field)?;
    c.info("rigid", r.rigid);
    c.info("betti_poset_hcw", r.betti_poset_hcw);
    c.record(
        "rigid_iff_hcw",
        check(r.agrees(), "rigidity and the hcw property of the Betti poset disagree"),
    );
    Ok(())
}

fn conic_invariants<F: Field>(conic: &ConicComplex<F>, deg: &[Multidegree]) -> CliResult<()> {
    conic.complex().check_square_zero()?;
    conic.check_kernels_against_skeleta()?;
    conic.check_cone_boundaries()?;
    conic.check_homogenize_round_trip(deg)?;
    let (a, b) = conic.compare_with_order_complex()?;
    check(a == b, "conic and simplicial homology differ")
}

fn verify_poset<F: Field>(ctx: &Ctx<F>, p: &Poset, c: &mut Checks) -> CliResult<()> {
    let hcw = p.is_hcw(&ctx.field)?;
    c.info("hcw", hcw);
    let conic = ConicComplex::new(p, ctx.field.clone())?;
    c.record(
        "square_zero",
        conic.complex().check_square_zero().map_err(CliError::from),
    );
    c.record(
        "conic_kernels",
        conic.check_kernels_against_skeleta().map_err(CliError::from),
    );
    c.record("cone_boundaries", conic.check_cone_boundaries().map_err(CliError::from));
    if let Some(deg) = p.degrees() {
        c.record(
            "homogenize_round_trip",
            conic.check_homogenize_round_trip(deg).map_err(CliError::from),
        );
        if hcw {
            c.record(
                "supports_resolution",
                check(conic.supports_resolution(deg)?.is_resolution, "not a resolution"),
            );
        }
    }
    if hcw {
        let (a, b) = conic.compare_with_order_complex()?;
        c.record("conic_vs_simplicial", check(a == b, "homology ranks differ"));
    }
    Ok(())
}

fn rigid<F: Field>(ctx: &Ctx<F>, format: Format) -> CliResult<Output> {
    let r = check_rigid_iff_hcw(&ctx.ideal()?, &ctx.field)?;
    let failed = usize::from(!r.agrees());
    if format == Format::Json {
        return Ok(Output { text: json(&r), failed });
    }
    let mut s = String::new();
    let _ = writeln!(s, "rigid: {}", r.rigid);
    match &r.violation {
        Some(RigidityViolation::R1 { i, deg, beta }) => {
            let _ = writeln!(s, "violation: R1 beta {i} {} = {beta}", ctx.mono(deg));
        }
        Some(RigidityViolation::R2 { i, lower, upper }) => {
            let _ = writeln!(
                s,
                "violation: R2 in degree {i}, {} divides {}",
                ctx.mono(lower),
                ctx.mono(upper)
            );
        }
        None => {}
    }
    let _ = writeln!(s, "betti_poset_size: {}", r.betti_poset_size);
    let _ = writeln!(s, "betti_poset_hcw: {}", r.betti_poset_hcw);
    if let Some(b) = r.incidence_maps_onto_betti_poset {
        let _ = writeln!(s, "incidence_onto_betti_poset: {b}");
    }
    if let Some(b) = r.incidence_isomorphic_to_betti_poset {
        let _ = writeln!(s, "incidence_isomorphic_to_betti_poset: {b}");
    }
    let _ = writeln!(s, "rigid_iff_hcw: {}", if failed == 0 { "pass" } else { "FAIL" });
    Ok(Output { text: s, failed })
}

fn betti_poset_cmd<F: Field>(ctx: &Ctx<F>, format: Format) -> CliResult<Output> {
    let p = betti_poset(&ctx.minimal()?.betti_table()?)?;
    match format {
        Format::Json => Ok(Output::ok(json(&p.to_json()))),
        Format::Dot => Ok(Output::ok(p.to_dot(&[]))),
        Format::Summary => {
            let mut s = String::new();
            poset_summary(&p, &ctx.field, &mut s)?;
            Ok(Output::ok(s))
        }
    }
}
