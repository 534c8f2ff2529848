use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Value};
use tcc_core::czindex::{default_reeb_vector, OrbitRecord};
use tcc_core::lens::{diffeo_realizable_units, reidemeister_delta, units};
use tcc_core::{
    betti_table, build_cosphere_diagram, check_condition_ii, classify_pair, lens_normal_form, make_reeb_vector,
    moment_cone, validate_toric_diagram, Error, MomentCone, Pi1Info, ReebVector, ToricDiagram,
};

use crate::input::{parse_geometry, parse_point, Geometry};
use crate::report::{self, betti_json, betti_text, ints, print_json, rational, set, small, tuple};

pub const EXIT_OK: u8 = 0;
pub const EXIT_MALFORMED: u8 = 1;
pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_DEGENERATE: u8 = 3;
pub const EXIT_VERIFY: u8 = 4;

#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn malformed(message: impl Into<String>) -> Self {
        Failure { code: EXIT_MALFORMED, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = if e.is_degeneracy() {
            EXIT_DEGENERATE
        } else if matches!(e, Error::InvalidInput(_) | Error::Dimension(_)) {
            EXIT_MALFORMED
        } else {
            EXIT_VALIDATION
        };
        Failure { code, message: e.to_string() }
    }
}

pub type Outcome = Result<u8, Failure>;

fn check_cap(cap: i64) -> Result<i64, Failure> {
    if cap < 0 || cap % 2 != 0 {
        return Err(Failure::malformed(format!("--cap must be even and nonnegative, got {cap}")));
    }
    Ok(cap)
}

fn vec_text(v: &[BigInt]) -> String {
    tuple(v)
}

fn orbit_json(o: &OrbitRecord) -> Value {
    json!({
        "edge": o.edge,
        "multiplicity": small(o.multiplicity),
        "mu_cz": small(o.mu_cz),
        "sft_degree": small(o.sft_degree),
        "class": small(o.class),
    })
}

/// Shared report for a cone with a chosen Reeb vector.
fn report_cone(
    header: Vec<String>,
    mut json_head: serde_json::Map<String, Value>,
    cone: &MomentCone,
    reeb: &ReebVector,
    cap: i64,
    as_json: bool,
) -> Outcome {
    let info = Pi1Info::new(cone)?;
    let (holds, witness) = check_condition_ii(cone, reeb)?;
    let table = betti_table(cone, reeb, cap)?;
    if as_json {
        json_head.insert("normals".into(), cone.normals().iter().map(|v| ints(v)).collect());
        json_head.insert("edges".into(), json!(cone.edges()));
        json_head.insert("certificate".into(), cone.certificate().map_or(Value::Null, |c| ints(c)));
        json_head.insert(
            "pi1".into(),
            json!({
                "order": small(info.order),
                "invariant_factors": ints(&info.invariant_factors),
                "reference_edge": info.reference,
                "edge_classes": info.classes.iter().map(|&c| small(c)).collect::<Vec<_>>(),
            }),
        );
        json_head.insert(
            "reeb".into(),
            Value::Array(reeb.components().iter().map(|c| Value::String(c.to_string())).collect()),
        );
        json_head.insert(
            "condition_ii".into(),
            json!({ "holds": holds, "witness": witness.as_ref().map(orbit_json) }),
        );
        json_head.insert("betti".into(), betti_json(&table));
        print_json(&Value::Object(json_head));
    } else {
        for line in header {
            println!("{line}");
        }
        println!("pi1: order {}, invariant factors {}", info.order, vec_text(&info.invariant_factors));
        println!(
            "Reeb vector: ({})",
            reeb.components().iter().map(|c| c.to_string()).collect::<Vec<_>>().join(", ")
        );
        match witness {
            None if holds => println!("condition (ii): holds"),
            _ => {
                let w = witness.expect("witness when condition fails");
                println!(
                    "condition (ii): fails (edge {}, multiplicity {}, degree {})",
                    w.edge, w.multiplicity, w.sft_degree
                );
            }
        }
        if table.divergent_edges.is_empty() {
            println!("divergent edges: none");
        } else {
            println!("divergent edges: {}", set(&table.divergent_edges));
        }
        println!("{}", betti_text(&table));
    }
    Ok(EXIT_OK)
}

fn diagram_header(d: &ToricDiagram) -> Vec<String> {
    let mut lines = vec![format!(
        "diagram: dim {}, {} vertices, {} facets",
        d.dim(),
        d.vertices().len(),
        d.facets().len()
    )];
    lines.push(format!(
        "vertices: {}",
        d.vertices().iter().map(|v| vec_text(v)).collect::<Vec<_>>().join(" ")
    ));
    if !d.discarded().is_empty() {
        lines.push(format!(
            "discarded non-vertex points: {}",
            d.discarded().iter().map(|v| vec_text(v)).collect::<Vec<_>>().join(" ")
        ));
    }
    lines
}

fn diagram_json(d: &ToricDiagram) -> serde_json::Map<String, Value> {
    let mut m = serde_json::Map::new();
    m.insert("dim".into(), json!(d.dim()));
    m.insert("vertices".into(), d.vertices().iter().map(|v| ints(v)).collect());
    m.insert("discarded".into(), d.discarded().iter().map(|v| ints(v)).collect());
    m
}

pub fn diagram(path: &Path, cap: Option<i64>, base: Option<&str>, as_json: bool) -> Outcome {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::malformed(format!("cannot read {}: {e}", path.display())))?;
    let geometry = parse_geometry(&text).map_err(Failure::malformed)?;
    match geometry {
        Geometry::Vertices(points) => {
            let d = validate_toric_diagram(&points)?;
            let cone = moment_cone(&d);
            let base: Vec<BigRational> = match base {
                Some(s) => parse_point(s).map_err(Failure::malformed)?,
                None => d.barycenter(),
            };
            let reeb = make_reeb_vector(&d, &base, None)?;
            let cap = check_cap(cap.unwrap_or(2 * d.dim() as i64 + 4))?;
            let mut header = diagram_header(&d);
            header.push(format!(
                "cone: good, Gorenstein certificate {}",
                cone.certificate().map_or("none".into(), |c| vec_text(c))
            ));
            report_cone(header, diagram_json(&d), &cone, &reeb, cap, as_json)
        }
        Geometry::Normals(normals) => {
            if base.is_some() {
                return Err(Failure::malformed("--base needs a diagram given by vertices"));
            }
            let cone = MomentCone::from_normals(normals)?;
            let reeb = default_reeb_vector(&cone)?;
            let cap = check_cap(cap.unwrap_or(2 * (cone.dim() as i64 - 1) + 4))?;
            let header = vec![
                format!("cone: {} normals in dimension {}, good", cone.normals().len(), cone.dim()),
                format!("Gorenstein certificate {}", cone.certificate().map_or("none".into(), |c| vec_text(c))),
            ];
            report_cone(header, serde_json::Map::new(), &cone, &reeb, cap, as_json)
        }
    }
}

pub fn cosphere(p: u64, q: u64, cap: Option<i64>, as_json: bool) -> Outcome {
    let d = build_cosphere_diagram(p, q)?;
    let cone = moment_cone(&d);
    let origin = vec![BigRational::from_integer(BigInt::from(0)); 2];
    let reeb = make_reeb_vector(&d, &origin, None)?;
    let cap = check_cap(cap.unwrap_or(8))?;
    let mut header = vec![format!("unit cosphere bundle of L^3_{p}({q})")];
    header.extend(diagram_header(&d));
    let mut head = diagram_json(&d);
    head.insert("p".into(), small(p));
    head.insert("q".into(), small(q));
    report_cone(header, head, &cone, &reeb, cap, as_json)
}

pub struct LensRequest {
    pub p: u64,
    pub weights: Vec<i64>,
    pub cbs: bool,
    pub by_class: bool,
    pub symmetry: bool,
    pub delta: bool,
    pub cap: Option<i64>,
    pub json: bool,
}

pub fn lens(req: &LensRequest) -> Outcome {
    let form = lens_normal_form(req.p, &req.weights)?;
    let cap = check_cap(req.cap.unwrap_or(2 * form.n as i64 + 4))?;
    let g = form.degrees();
    let mut out = serde_json::Map::new();
    out.insert("p".into(), small(form.p));
    out.insert("n".into(), json!(form.n));
    out.insert("weights".into(), json!(req.weights));
    out.insert(
        "normal_form".into(),
        json!({
            "alphas": form.alphas,
            "alpha0": form.alpha0,
            "a_n": small(form.a_n),
            "weights": form.normalized_weights(),
        }),
    );
    out.insert("g".into(), json!(g));
    let mut lines = vec![
        format!("L_{}{}: n = {}, p = {}", form.p, tuple(&req.weights), form.n, form.p),
        format!(
            "normal form: alpha = {}, alpha0 = {}, a_n = {}, weights {}",
            tuple(&form.alphas),
            form.alpha0,
            form.a_n,
            tuple(&form.normalized_weights())
        ),
        format!("g(1..{}) = {}", form.p, tuple(&g)),
    ];
    if req.cbs {
        let c = form.cbs();
        lines.push(format!("cbs = {}", tuple(&c)));
        out.insert("cbs".into(), json!(c));
    }
    if req.by_class {
        let tables = form.class_tables(cap);
        let mut header = vec!["class".to_string()];
        header.extend((0..=cap).step_by(2).map(|d| format!("deg {d}")));
        let rows: Vec<Vec<String>> = tables
            .iter()
            .enumerate()
            .map(|(k, t)| std::iter::once(k.to_string()).chain(t.values().map(u64::to_string)).collect())
            .collect();
        lines.push(format!("per-class Betti numbers (class k = [gamma_0^k]), cap {cap}:"));
        lines.push(report::render(&header, &rows));
        out.insert("cap".into(), json!(cap));
        out.insert("by_class".into(), tables.iter().map(report::degree_map).collect());
    }
    if req.symmetry {
        let sym = form.contact_symmetry_set();
        let realizable = diffeo_realizable_units(form.p, &req.weights)?;
        let mut with_conj: Vec<u64> = sym.iter().flat_map(|&k| [k, (form.p - k) % form.p.max(1)]).collect();
        with_conj.retain(|&k| form.p == 1 || k != 0);
        with_conj.sort_unstable();
        with_conj.dedup();
        let realizable_units: Vec<u64> = realizable.iter().map(|(k, _)| *k).collect();
        lines.push(format!("contact symmetry set = {}", set(&sym)));
        lines.push(format!("contact symmetry with conjugation = {}", set(&with_conj)));
        lines.push(format!(
            "diffeo-realizable units = {} ({})",
            set(&realizable_units),
            realizable.iter().map(|(k, u)| format!("k={k}: u={u}")).collect::<Vec<_>>().join(", ")
        ));
        let exceeds = realizable_units.iter().any(|k| !with_conj.contains(k));
        lines.push(format!(
            "realizable units beyond contact symmetry and conjugation: {}",
            if exceeds { "yes" } else { "no" }
        ));
        out.insert(
            "symmetry".into(),
            json!({
                "units": units(form.p),
                "contact_symmetry_set": sym,
                "with_conjugation": with_conj,
                "diffeo_realizable": realizable.iter().map(|(k, u)| json!({"k": k, "u": u})).collect::<Vec<_>>(),
                "realizable_exceeds_symmetry": exceeds,
            }),
        );
    }
    if req.delta {
        let d = reidemeister_delta(form.p, &req.weights)?;
        lines.push(format!("Delta = {d}"));
        out.insert("delta".into(), d.coefficients.iter().map(rational).collect());
    }
    if req.json {
        print_json(&Value::Object(out));
    } else {
        for l in lines {
            println!("{l}");
        }
    }
    Ok(EXIT_OK)
}

pub fn compare(p: u64, w1: &[i64], w2: &[i64], as_json: bool) -> Outcome {
    let c = classify_pair(p, w1, w2)?;
    let diffeo = match (&c.diffeo.witness, c.diffeo.even_witness) {
        (Some(_), true) => "diffeomorphic",
        (Some(_), false) => "diffeomorphic (odd number of sign changes only)",
        (None, _) => "not diffeomorphic",
    };
    if as_json {
        let witness = c.diffeo.witness.as_ref().map(|w| {
            json!({ "k": w.k, "flips": w.flips, "permutation": w.permutation, "flip_count": w.flip_count() })
        });
        print_json(&json!({
            "p": small(p),
            "diffeomorphic": c.diffeo.equivalent(),
            "even_sign_changes": c.diffeo.even_witness,
            "witness": witness,
            "cbs": [c.cbs_first, c.cbs_second],
            "class_relabelings": c.class_relabelings,
            "verdict": c.verdict.to_string(),
        }));
    } else {
        println!("{diffeo}; {}", c.verdict);
        println!("cbs first  = {}", tuple(&c.cbs_first));
        println!("cbs second = {}", tuple(&c.cbs_second));
        if let Some(w) = &c.diffeo.witness {
            println!(
                "witness: k = {}, {} sign changes, permutation {}",
                w.k,
                w.flip_count(),
                tuple(&w.permutation)
            );
        }
        println!("units matching per-class data: {}", set(&c.class_relabelings));
    }
    Ok(EXIT_OK)
}
