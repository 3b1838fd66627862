use std::fmt::Write as _;
use std::path::Path;

use anyhow::{anyhow, bail, Context, Result};
use serde::Deserialize;
use serde_json::{json, Value};

use hamlat_core::cubic::verify_nodal_configuration;
use hamlat_core::decomposition::{conic_class, e3_prime, e8_prime, enumerate_decompositions, nodal_cubic_class};
use hamlat_core::hamiltonian::{ell23_dictionary_report, isotropy_spheres, moment_polytope, tolman_data};
use hamlat_core::rational::{fmt_q, parse_q};
use hamlat_core::reduced_space::{
    chi_class, epsilon_class, euler_class, homology_z, in_toric_range, lambda_of_kappa, min_area_exceptional,
    omega_class, pullback_class, scale_of_kappa,
};
use hamlat_core::snf::{describe_group, parse_matrix, smith_normal_form};
use hamlat_core::toric::{resolve_cut_triangle, resolve_polytope, Point2, Polytope2};
use hamlat_core::verify::{dictionary_checks, verify_all};
use hamlat_core::weyl::{enumerate_exceptional, find_word, verify_dictionary, verify_lattice_map};
use hamlat_core::{AdmissibilityProfile, Dictionary, DivisorClass, LatticeMap, SearchBudget, Status, Q};

use crate::{svg, Cli, Command, CubicAction, DictName, Global, Profile};

/// What a command produced, before the global flags decide where it goes.
pub struct Rendered {
    pub json: Value,
    pub text: String,
    pub failed: bool,
    pub golden: Option<String>,
    pub svg: Option<String>,
}

impl Rendered {
    fn new(json: Value, text: String) -> Self {
        Self { json, text, failed: false, golden: None, svg: None }
    }

    fn golden(mut self, name: impl Into<String>) -> Self {
        self.golden = Some(format!("{}.json", name.into()));
        self
    }

    fn failed_if(mut self, failed: bool) -> Self {
        self.failed = failed;
        self
    }
}

pub fn to_pretty(v: &Value) -> Result<String> {
    let mut s = serde_json::to_string_pretty(v)?;
    s.push('\n');
    Ok(s)
}

fn rational(s: &str) -> Result<Q> {
    parse_q(s).with_context(|| format!("bad number {s:?}"))
}

fn class(s: &str, k: Option<usize>) -> Result<DivisorClass> {
    DivisorClass::parse(s, k).with_context(|| format!("bad class {s:?}"))
}

fn to_json<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn budget(global: &Global) -> SearchBudget {
    let mut b = SearchBudget::default();
    if let Some(n) = global.max_depth {
        b.max_parts = n as u32;
    }
    b
}

fn dictionary(name: DictName) -> Dictionary {
    match name {
        DictName::Hat7 => Dictionary::Hat7,
        DictName::Tilde8 => Dictionary::Tilde8,
        DictName::Primed7 => Dictionary::Primed7,
        DictName::Primed8 => Dictionary::Primed8,
        DictName::Hat5 => Dictionary::Hat5,
        DictName::Hat6 => Dictionary::Hat6,
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum ClassInput {
    Text(String),
    Full(DivisorClass),
}

#[derive(Deserialize)]
struct MapFixture {
    name: String,
    images: Vec<ClassInput>,
}

fn load_fixture(path: &Path) -> Result<(String, LatticeMap)> {
    let raw = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let fx: MapFixture = serde_json::from_str(&raw).with_context(|| format!("parsing {}", path.display()))?;
    let k = fx.images.len().checked_sub(1).ok_or_else(|| anyhow!("fixture has no images"))?;
    let images = fx
        .images
        .iter()
        .map(|c| match c {
            ClassInput::Text(s) => class(s, Some(k)),
            ClassInput::Full(c) => Ok(c.clone()),
        })
        .collect::<Result<Vec<_>>>()?;
    let map = LatticeMap::new(images).with_context(|| format!("fixture {}", fx.name))?;
    Ok((fx.name, map))
}

pub fn run(cli: &Cli) -> Result<Rendered> {
    let g = &cli.global;
    match &cli.command {
        Command::VerifyAll { fixture } => cmd_verify_all(g, fixture),
        Command::EnumerateExceptional { k } => cmd_exceptional(*k),
        Command::FindWord { from, to, k, max } => cmd_find_word(from, to, *k, max.or(g.max_depth).unwrap_or(8)),
        Command::VerifyDictionary { name, fixture } => cmd_dictionary(*name, fixture.as_deref()),
        Command::ResolvePolytope { l, lambda, vertices } => cmd_resolve(*l, lambda, vertices.as_deref()),
        Command::ReducedClass { l, kappa } => cmd_reduced(*l, kappa),
        Command::MinArea { k, lambda, eps } => cmd_min_area(*k, lambda, eps),
        Command::Snf { matrix } => cmd_snf(matrix),
        Command::Decompose { target, profile, lift, up_to_symmetry } => {
            cmd_decompose(g, target, *profile, lift, *up_to_symmetry)
        }
        Command::Cubic { action: CubicAction::Verify { .. } } => cmd_cubic(),
        Command::FixedPoints { l } => cmd_fixed_points(*l),
        Command::Slice { l, x3 } => cmd_slice(*l, x3),
        Command::Report { l } => cmd_report(*l),
    }
}

fn cmd_verify_all(g: &Global, fixtures: &[std::path::PathBuf]) -> Result<Rendered> {
    let mut report = verify_all(budget(g))?;
    for path in fixtures {
        let (name, map) = load_fixture(path)?;
        report.extend(dictionary_checks(&name, &map));
    }
    let mut text = report.to_string();
    for c in report.checks.iter().filter(|c| c.status == Status::Fail) {
        let _ = write!(text, "\nwitness for {}: {}", c.id, c.witness);
    }
    let failed = !report.passed();
    Ok(Rendered::new(to_json(&report), text).failed_if(failed))
}

fn cmd_exceptional(k: usize) -> Result<Rendered> {
    let classes = enumerate_exceptional(k)?;
    let names: Vec<String> = classes.iter().map(ToString::to_string).collect();
    let text = format!("{} exceptional classes on X_{k}\n{}", names.len(), names.join("\n"));
    let json = json!({ "k": k, "count": names.len(), "classes": names });
    Ok(Rendered::new(json, text).golden(format!("exceptional-k{k}")))
}

fn cmd_find_word(from: &str, to: &str, k: Option<usize>, max: usize) -> Result<Rendered> {
    let k = match k {
        Some(k) => k,
        None => class(from, None)?.k().max(class(to, None)?.k()),
    };
    let (src, tgt) = (class(from, Some(k))?, class(to, Some(k))?);
    let word = find_word(&src, &tgt, max)?;
    let letters: Option<Vec<String>> = word.map(|w| w.iter().map(ToString::to_string).collect());
    let text = match &letters {
        Some(w) if w.is_empty() => format!("{src} = {tgt}, empty word"),
        Some(w) => format!("{} : {src} -> {tgt} (length {})", w.join(" "), w.len()),
        None => format!("no word of length <= {max} takes {src} to {tgt}"),
    };
    let json = json!({
        "k": k,
        "from": src.to_string(),
        "to": tgt.to_string(),
        "max_len": max,
        "word": letters,
    });
    Ok(Rendered::new(json, text).failed_if(letters.is_none()))
}

fn dictionary_text(r: &hamlat_core::weyl::DictionaryReport) -> String {
    let mut t = format!("{} on X_{} (l = {})\n", r.name, r.k, r.ell);
    for (i, img) in r.images.iter().enumerate() {
        let src = DivisorClass::basis(r.k, i);
        let _ = writeln!(t, "  {src} -> {img}");
    }
    let yn = |b: bool| if b { "yes" } else { "no" };
    let _ = writeln!(t, "automorphism: {}", yn(r.valid));
    for f in &r.validity_failures {
        let _ = writeln!(t, "  {f}");
    }
    let _ = writeln!(t, "epsilon {} -> {}: negated {}", r.epsilon, r.epsilon_image, yn(r.epsilon_negated));
    let _ = writeln!(t, "H0 preserved: {}", yn(r.h0_preserved));
    let _ = writeln!(t, "every A + image(A) a multiple of K: {}", yn(r.all_pairs_anticanonical));
    for n in &r.notes {
        let _ = writeln!(t, "note: {n}");
    }
    t
}

fn cmd_dictionary(name: Option<DictName>, fixture: Option<&Path>) -> Result<Rendered> {
    let (report, golden) = match (name, fixture) {
        (Some(n), _) => {
            let d = dictionary(n);
            (verify_dictionary(d), Some(format!("dictionary-{}", d.name())))
        }
        (None, Some(path)) => {
            let (name, map) = load_fixture(path)?;
            (verify_lattice_map(&name, &map)?, None)
        }
        (None, None) => bail!("give --name or --fixture"),
    };
    let failed = !report.valid;
    let mut out = Rendered::new(to_json(&report), dictionary_text(&report)).failed_if(failed);
    out.golden = golden.map(|g| format!("{g}.json"));
    Ok(out)
}

fn parse_vertices(s: &str) -> Result<Vec<Point2>> {
    s.split(';')
        .map(|p| {
            let (x, y) = p.split_once(',').ok_or_else(|| anyhow!("vertex {p:?} is not x,y"))?;
            Ok(Point2::new(rational(x)?, rational(y)?))
        })
        .collect()
}

fn cmd_resolve(ell: i128, lambda: &str, vertices: Option<&str>) -> Result<Rendered> {
    let (vertices, rays, si, golden) = match vertices {
        Some(v) => {
            let p = Polytope2::new(parse_vertices(v)?)?;
            let fan = resolve_polytope(&p);
            let si = fan.self_intersections()?;
            (p.vertices().to_vec(), fan.rays, si, None)
        }
        None => {
            let lam = rational(lambda)?;
            let r = resolve_cut_triangle(ell, lam)?;
            let golden = (lam == Q::new(1, 2)).then(|| format!("resolve-l{ell}"));
            (r.vertices, r.conormals, r.self_intersections, golden)
        }
    };
    let total: i128 = si.iter().sum();
    let mut text = String::from("vertices:");
    for v in &vertices {
        let _ = write!(text, " ({}, {})", v.x, v.y);
    }
    text.push_str("\nconormals:");
    for r in &rays {
        let _ = write!(text, " ({}, {})", r[0], r[1]);
    }
    let _ = write!(text, "\nself-intersections: {si:?} (sum {total})");
    let json = json!({
        "vertices": to_json(&vertices),
        "conormals": rays,
        "self_intersections": si,
    });
    let mut out = Rendered::new(json, text);
    out.golden = golden.map(|g| format!("{g}.json"));
    out.svg = Some(svg::polygon_and_fan(&vertices, Some(&rays)));
    Ok(out)
}

fn pair(v: (Q, Q)) -> Value {
    json!([fmt_q(&v.0), fmt_q(&v.1)])
}

fn cmd_reduced(ell: i128, kappa: &str) -> Result<Rendered> {
    let kappa = rational(kappa)?;
    let omega = omega_class(ell)?.at(kappa);
    let euler = euler_class(ell)?.at(kappa);
    let lambda = lambda_of_kappa(ell, kappa);
    let scale = scale_of_kappa(kappa);
    let pullback = pullback_class(ell, kappa)?;
    let epsilon = epsilon_class(ell)?;
    let toric = in_toric_range(ell, kappa);
    let text = format!(
        "l = {ell}, kappa = {}\n[omega] on (D1, D2): ({}, {})\ne on (D1, D2): ({}, {})\n\
         lambda = {}, scale = {}, toric range: {}\npullback: {pullback}\nepsilon: {epsilon}",
        fmt_q(&kappa),
        fmt_q(&omega.0),
        fmt_q(&omega.1),
        fmt_q(&euler.0),
        fmt_q(&euler.1),
        fmt_q(&lambda),
        fmt_q(&scale),
        if toric { "yes" } else { "no" },
    );
    let json = json!({
        "ell": ell,
        "kappa": fmt_q(&kappa),
        "omega": pair(omega),
        "euler": pair(euler),
        "lambda": fmt_q(&lambda),
        "scale": fmt_q(&scale),
        "in_toric_range": toric,
        "pullback": pullback.to_string(),
        "epsilon": epsilon.to_string(),
    });
    Ok(Rendered::new(json, text))
}

fn cmd_min_area(k: usize, lambda: &str, eps: &str) -> Result<Rendered> {
    let r = min_area_exceptional(k, rational(lambda)?, rational(eps)?)?;
    let argmin: Vec<String> = r.argmin.iter().map(ToString::to_string).collect();
    let text = format!(
        "minimum area {} over {} exceptional classes, attained by\n  {}",
        fmt_q(&r.minimum),
        r.candidates,
        argmin.join("\n  ")
    );
    Ok(Rendered::new(to_json(&r), text))
}

fn cmd_snf(matrix: &str) -> Result<Rendered> {
    let a = parse_matrix(matrix)?;
    let s = smith_normal_form(&a)?;
    let mut orders = s.diagonal.clone();
    orders.extend(std::iter::repeat_n(0, s.free_rank(a.len()) - orders.iter().filter(|&&x| x == 0).count()));
    let cokernel = describe_group(&orders);
    let text = format!("diagonal {:?}\ncokernel {cokernel}", s.diagonal);
    let json = json!({
        "matrix": a,
        "diagonal": s.diagonal,
        "u": s.u,
        "v": s.v,
        "cokernel": cokernel,
    });
    Ok(Rendered::new(json, text))
}

fn slug(target: &DivisorClass) -> String {
    if *target == e8_prime() {
        "e8prime".into()
    } else if *target == e3_prime() {
        "e3prime".into()
    } else if *target == conic_class() {
        "conic".into()
    } else if *target == nodal_cubic_class() {
        "cubic".into()
    } else {
        target.to_string().chars().map(|c| if c.is_ascii_alphanumeric() { c } else { '_' }).collect()
    }
}

fn cmd_decompose(g: &Global, target: &str, profile: Profile, lift: &[String], sym: bool) -> Result<Rendered> {
    let mut p = match profile {
        Profile::Base => AdmissibilityProfile::base(8),
        Profile::Step2 => AdmissibilityProfile::step2(),
        Profile::Step3 => AdmissibilityProfile::step3(),
    };
    let target = class(target, Some(p.k))?;
    for c in lift {
        let c = class(c, Some(p.k))?;
        if !p.excluded.contains(&c) {
            bail!("{c} is not excluded by profile {}", p.name);
        }
        p = p.without_exclusion(&c);
    }
    if sym {
        p = p.up_to_block_symmetry();
    }
    let decs = enumerate_decompositions(&target, &p, budget(g))?;
    let shown: Vec<String> = decs.iter().map(ToString::to_string).collect();
    let mut text = format!("{target} under {}: {} decomposition(s)", p.name, decs.len());
    for s in &shown {
        let _ = write!(text, "\n  {s}");
    }
    let json = json!({
        "target": target.to_string(),
        "profile": p.name,
        "count": decs.len(),
        "irreducible": decs.is_empty(),
        "decompositions": shown,
    });
    let mut out = Rendered::new(json, text);
    if g.max_depth.is_none() && !sym {
        out = out.golden(format!("decompose-{}-{}", p.name, slug(&target)));
    }
    Ok(out)
}

fn cmd_cubic() -> Result<Rendered> {
    let r = verify_nodal_configuration();
    let mut text = format!("F = {}", r.polynomial);
    for c in &r.checks {
        let _ = write!(text, "\n{} {:<28} {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
    }
    Ok(Rendered::new(to_json(&r), text).failed_if(!r.passed))
}

fn cmd_fixed_points(ell: i128) -> Result<Rendered> {
    let data = tolman_data(ell)?;
    let spheres = isotropy_spheres(&data);
    let mut text = format!("l = {ell}, c1(beta) = {}\n", data.c1_beta);
    for p in &data.points {
        let _ = writeln!(text, "  {} level {} index {} weights {:?}", p.name, fmt_q(&p.level), p.index, p.weights);
    }
    text.push_str("isotropy spheres:");
    for s in &spheres {
        let _ = write!(text, "\n  Z/{} from {} to {}", s.order, s.from, s.to);
    }
    let json = json!({ "data": to_json(&data), "isotropy_spheres": to_json(&spheres) });
    Ok(Rendered::new(json, text).golden(format!("fixed-points-l{ell}")))
}

fn cmd_slice(ell: i128, x3: &str) -> Result<Rendered> {
    let p = moment_polytope(ell)?;
    let s = p.slice(rational(x3)?)?;
    let matches = s.matches_omega()?;
    let vertices = s.polytope.vertices().to_vec();
    let fan = s.polytope.fan();
    let text = format!(
        "l = {ell}, x3 = {}, kappa = {}: {} facets, D1 edge {}, D2 edge {}; matches [omega]: {}",
        fmt_q(&s.x3),
        fmt_q(&s.kappa),
        s.facet_count,
        fmt_q(&s.d1_length),
        s.d2_length.map_or("absent".to_string(), |l| fmt_q(&l)),
        if matches { "yes" } else { "no" }
    );
    let mut json = to_json(&s);
    json["vertices"] = to_json(&vertices);
    json["matches_omega"] = json!(matches);
    let mut out = Rendered::new(json, text).failed_if(!matches);
    out.svg = Some(svg::polygon_and_fan(&vertices, Some(&fan.rays)));
    Ok(out)
}

fn cmd_report(ell: i128) -> Result<Rendered> {
    let data = tolman_data(ell)?;
    let spheres = isotropy_spheres(&data);
    let poly = moment_polytope(ell)?;
    let (lo, hi) = poly.height_range();
    let mut slices = Vec::new();
    let mut all_match = true;
    for n in 1..12 {
        let x3 = lo + (hi - lo) * Q::new(n, 12);
        let s = poly.slice(x3)?;
        let m = s.matches_omega()?;
        all_match &= m;
        slices.push(json!({
            "x3": fmt_q(&s.x3),
            "facets": s.facet_count,
            "d1": fmt_q(&s.d1_length),
            "d2": s.d2_length.map(|l| fmt_q(&l)),
            "matches_omega": m,
        }));
    }
    let omega = omega_class(ell)?;
    let euler = euler_class(ell)?;
    let homology = homology_z(ell)?;
    let k = (ell + 3) as usize;
    let chi = chi_class(k).ok();
    let dictionary = Dictionary::ALL.iter().copied().find(|d| d.k() == k).map(verify_dictionary);
    let small = if ell <= 3 { Some(ell23_dictionary_report()?) } else { None };
    let mut flags: Vec<String> = small.as_ref().map(|r| r.flags.clone()).unwrap_or_default();
    if let Some(c) = &homology.caveat {
        flags.push(c.clone());
    }
    let json = json!({
        "ell": ell,
        "fixed_points": to_json(&data),
        "isotropy_spheres": to_json(&spheres),
        "moment_polytope": {
            "inequalities": poly.unnormalized_description(),
            "height_range": [fmt_q(&lo), fmt_q(&hi)],
            "critical_height": fmt_q(&poly.critical_height()),
            "slices": slices,
        },
        "omega": to_json(&omega),
        "euler": to_json(&euler),
        "euler_is_minus_derivative": euler == omega.neg_derivative(),
        "homology": to_json(&homology),
        "chi": chi.as_ref().map(ToString::to_string),
        "dictionary": dictionary.as_ref().map(to_json),
        "small_ell": small.as_ref().map(to_json),
        "flags": flags,
    });
    let mut text = format!("report for l = {ell}\n");
    let _ = writeln!(text, "fixed points:");
    for p in &data.points {
        let _ = writeln!(text, "  {} level {} weights {:?}", p.name, fmt_q(&p.level), p.weights);
    }
    for s in &spheres {
        let _ = writeln!(text, "  Z/{} sphere {} -> {}", s.order, s.from, s.to);
    }
    let _ = writeln!(
        text,
        "moment polytope heights ({}, {}), critical {}; slices match [omega]: {}",
        fmt_q(&lo),
        fmt_q(&hi),
        fmt_q(&poly.critical_height()),
        all_match
    );
    let (w1, w2) = omega.at(Q::from_integer(0));
    let _ = writeln!(text, "[omega] at kappa = 0: ({}, {})", fmt_q(&w1), fmt_q(&w2));
    let _ = writeln!(text, "e = -d[omega]/dkappa: {}", euler == omega.neg_derivative());
    let _ = writeln!(text, "H1 torsion: {}", homology.cokernel);
    if let Some(c) = &chi {
        let _ = writeln!(text, "chi = {c}");
    }
    if let Some(d) = &dictionary {
        text.push_str(&dictionary_text(d));
    }
    for f in &flags {
        let _ = writeln!(text, "flag: {f}");
    }
    let failed = !all_match || euler != omega.neg_derivative() || dictionary.as_ref().is_some_and(|d| !d.valid);
    Ok(Rendered::new(json, text).failed_if(failed).golden(format!("report-l{ell}")))
}
