use std::path::Path;

use serde_json::{json, Value};
use star_core::fano::{
    canonical_subspace, cayley_lines, chart_equations, chart_point_to_matrix, double_factorial_odd,
    enumerate_isolated_subspaces, matching_to_branch_matrix, perfect_matchings, solve_chart_newton,
    subspace_in_hypersurface, LineLabel,
};
use star_core::numeric2d::{apply_star, invert_star, make_phantom, null_residual, Domain2D, Field2D, Phantom};
use star_core::polyring::json::{
    exact_matrix_to_json, exact_polynomial_to_json, float_matrix_to_json, matrix_to_json, polynomial_to_json,
};
use star_core::polyring::{elementary_symmetric, Matrix, Rational, Scalar};
use star_core::starcore::json::star_from_json;
use star_core::starcore::json::star_to_json;
use star_core::starcore::{is_injective, AnyBranchMatrix, AnyStar};
use star_core::symmetry::{
    branch_symmetries, is_group, is_invariant_polynomial, platonic_branches, regular_polygon_branches, SolidKind,
};

use crate::args::{FanoCommand, Shape, ShapesArgs, SimCommand};
use crate::fail::{CliError, CliResult};
use crate::report::{sha256_hex, Inputs};

/// Result of a command: report outputs, text rendering and exit status.
pub struct Outcome {
    pub outputs: Value,
    pub text: String,
    pub exit: u8,
}

impl Outcome {
    fn ok(outputs: Value, text: String) -> Self {
        Outcome { outputs, text, exit: 0 }
    }
}

fn load_star(inputs: &mut Inputs, name: &str, path: &Path) -> CliResult<AnyStar> {
    Ok(star_from_json(&inputs.read_json(name, path)?)?)
}

fn load_phantom(inputs: &mut Inputs, path: &Path) -> CliResult<Phantom> {
    serde_json::from_value(inputs.read_json("phantom", path)?)
        .map_err(|e| CliError::Parse(format!("{}: {e}", path.display())))
}

fn load_field(inputs: &mut Inputs, name: &str, path: &Path) -> CliResult<Field2D> {
    let bytes = inputs.read(name, path)?;
    Ok(Field2D::read_binary(&bytes[..], 1.0)?)
}

fn scalar_json(c: &Scalar) -> Value {
    match c {
        Scalar::Exact(r) => json!(r.to_string()),
        Scalar::Float(x) => json!(x),
    }
}

fn star_injective(s: &AnyStar) -> CliResult<bool> {
    Ok(match s {
        AnyStar::Exact(s) => is_injective(s)?,
        AnyStar::Float(s) => is_injective(s)?,
    })
}

fn field_tag(s: &AnyStar) -> &'static str {
    match s {
        AnyStar::Exact(_) => "exact",
        AnyStar::Float(_) => "float",
    }
}

fn clean(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        0.0
    } else {
        x
    }
}

pub fn dual(inputs: &mut Inputs, path: &Path, permanent: bool) -> CliResult<Outcome> {
    let s = load_star(inputs, "star", path)?;
    let d = if permanent {
        s.dual_symbol_permanent_path()?
    } else {
        s.dual_symbol()?
    };
    let class = d.classify()?;
    let lp = d.laplacian_power_form();
    let mut text = format!("sigma = {}\nclass: {class}\n", d.display());
    match &lp {
        Some((c, j)) => text.push_str(&format!("laplacian power: C = {c}, j = {j}\n")),
        None => text.push_str("laplacian power: none\n"),
    }
    let outputs = json!({
        "m": s.m(),
        "n": s.n(),
        "field": field_tag(&s),
        "path": d.path(),
        "sigma": polynomial_to_json(&d.sigma()),
        "display": d.display(),
        "class": class,
        "laplacian_power": lp.map(|(c, j)| json!({"c": scalar_json(&c), "c_f64": c.to_f64(), "j": j})),
    });
    Ok(Outcome::ok(outputs, text))
}

pub fn injective(inputs: &mut Inputs, path: &Path) -> CliResult<Outcome> {
    let s = load_star(inputs, "star", path)?;
    let d = s.dual_symbol()?;
    let inj = star_injective(&s)?;
    let text = format!(
        "{}\nsigma = {}\n",
        if inj { "injective" } else { "not injective" },
        d.display()
    );
    let outputs = json!({"injective": inj, "sigma": polynomial_to_json(&d.sigma()), "display": d.display()});
    Ok(Outcome {
        outputs,
        text,
        exit: if inj { 0 } else { 1 },
    })
}

pub fn symmetry(inputs: &mut Inputs, path: &Path) -> CliResult<Outcome> {
    let s = load_star(inputs, "star", path)?;
    let sigma = s.dual_symbol()?.sigma_f64();
    let syms = branch_symmetries(&s.branches().to_f64())?;
    let mut entries = Vec::with_capacity(syms.len());
    let mut all = true;
    for (g, alpha) in &syms {
        let inv = is_invariant_polynomial(&sigma, g)?;
        all &= inv;
        let rows: Vec<Vec<f64>> = (0..g.dim())
            .map(|i| g.matrix().row(i).iter().map(|&x| clean(x)).collect())
            .collect();
        let perm: Vec<usize> = alpha.as_slice().iter().map(|&i| i + 1).collect();
        entries.push(json!({"g": rows, "permutation": perm, "invariant": inv}));
    }
    let maps: Vec<_> = syms.iter().map(|(g, _)| g.clone()).collect();
    let group = is_group(&maps);
    let text = format!(
        "{} symmetries, group: {}, dual symbol invariant under all: {}\n",
        syms.len(),
        if group { "yes" } else { "no" },
        if all { "yes" } else { "no" }
    );
    let outputs = json!({"count": syms.len(), "is_group": group, "all_invariant": all, "symmetries": entries});
    Ok(Outcome::ok(outputs, text))
}

fn write_json(path: &Path, v: &Value) -> CliResult<String> {
    let mut body = serde_json::to_string_pretty(v).map_err(|e| CliError::Parse(e.to_string()))?;
    body.push('\n');
    std::fs::write(path, &body).map_err(|e| CliError::io(path, e))?;
    Ok(sha256_hex(body.as_bytes()))
}

pub fn shapes(a: &ShapesArgs) -> CliResult<Outcome> {
    let (name, u) = match a.shape {
        Shape::Polygon => {
            let m = a.m.ok_or_else(|| CliError::Parse("shapes polygon needs --m".into()))?;
            (
                format!("polygon-{m}"),
                AnyBranchMatrix::Float(regular_polygon_branches(m)?),
            )
        }
        other => {
            if a.m.is_some() {
                return Err(CliError::Parse("--m only applies to polygon".into()));
            }
            let kind = match other {
                Shape::Tetrahedron => SolidKind::Tetrahedron,
                Shape::Cube => SolidKind::Cube,
                Shape::Octahedron => SolidKind::Octahedron,
                Shape::Icosahedron => SolidKind::Icosahedron,
                _ => SolidKind::Dodecahedron,
            };
            (kind.name().to_string(), platonic_branches(kind))
        }
    };
    let artifact = match a.elementary {
        Some(k) => star_to_json(&u.elementary_star(k)?),
        None => matrix_to_json(&u.to_any_matrix()),
    };
    let mut outputs = json!({"shape": name, "m": u.m(), "n": u.n(), "artifact": artifact});
    if let Some(out) = &a.out {
        outputs["written"] = json!({"path": out.display().to_string(), "sha256": write_json(out, &artifact)?});
    }
    let text = format!(
        "{name}: {} x {}\n{}\n",
        u.m(),
        u.n(),
        serde_json::to_string(&artifact).unwrap_or_default()
    );
    Ok(Outcome::ok(outputs, text))
}

pub fn fano(cmd: &FanoCommand, seed: u64) -> CliResult<Outcome> {
    match *cmd {
        FanoCommand::Matchings { n } => fano_matchings(n),
        FanoCommand::Cayley => fano_cayley(),
        FanoCommand::Chart { m, n, solve, starts } => fano_chart(m, n, solve.then_some(starts), seed),
    }
}

fn fano_matchings(n: usize) -> CliResult<Outcome> {
    if n == 0 {
        return Err(CliError::Parse("--n must be at least 1".into()));
    }
    let m = 2 * n;
    let matchings = perfect_matchings(m)?;
    let canons = enumerate_isolated_subspaces(n)?;
    let mut text = format!(
        "{} matchings of {{1..{m}}}, all distinct and in V(e_{})\n",
        matchings.len(),
        m - 1
    );
    let items: Vec<Value> = matchings
        .iter()
        .zip(&canons)
        .map(|(mt, c)| {
            text.push_str(&format!("{mt}\n"));
            json!({
                "matching": mt.to_string(),
                "U": exact_matrix_to_json(matching_to_branch_matrix(mt).matrix()),
                "canonical": exact_matrix_to_json(c.matrix()),
            })
        })
        .collect();
    let outputs = json!({
        "n": n,
        "m": m,
        "count": matchings.len(),
        "expected": double_factorial_odd(m),
        "all_distinct": true,
        "all_in_hypersurface": true,
        "matchings": items,
    });
    Ok(Outcome::ok(outputs, text))
}

fn fano_cayley() -> CliResult<Outcome> {
    let e3 = elementary_symmetric::<Rational>(3, 4)?;
    let mut text = String::new();
    let mut lines = Vec::new();
    for l in cayley_lines() {
        let label = match &l.label {
            LineLabel::Pair(i, j) => format!("L{i}{j}"),
            LineLabel::Matching(mt) => format!("M{mt}"),
        };
        let inside = subspace_in_hypersurface(&l.basis, &e3)?;
        let kind = serde_json::to_value(l.kind)
            .ok()
            .and_then(|v| v.as_str().map(String::from))
            .unwrap_or_default();
        text.push_str(&format!("{label} ({kind}) in V(e_3): {inside}\n"));
        lines.push(json!({
            "label": label,
            "kind": l.kind,
            "basis": exact_matrix_to_json(&l.basis),
            "canonical": exact_matrix_to_json(canonical_subspace(&l.basis)?.matrix()),
            "in_hypersurface": inside,
        }));
    }
    Ok(Outcome::ok(json!({"count": lines.len(), "lines": lines}), text))
}

fn fano_chart(m: usize, n: usize, starts: Option<usize>, seed: u64) -> CliResult<Outcome> {
    let cs = chart_equations(m, n)?;
    let names: Vec<String> = (0..cs.unknown_count()).map(|k| cs.unknown_name(k)).collect();
    let mut text = format!(
        "chart of V(e_{}) for {m} x {n}: {} equations in {}\n",
        m - 1,
        cs.equations.len(),
        names.join(", ")
    );
    let equations: Vec<Value> = cs
        .monomials
        .iter()
        .zip(&cs.equations)
        .map(|(mono, eq)| {
            let shown = eq.display_named(&names);
            text.push_str(&format!("{shown} = 0\n"));
            json!({"monomial": mono.exponents(), "polynomial": exact_polynomial_to_json(eq), "display": shown})
        })
        .collect();
    let mut outputs = json!({"m": m, "n": n, "unknowns": names, "equations": equations});
    if let Some(starts) = starts {
        let e = elementary_symmetric::<f64>(m - 1, m)?;
        let clusters = solve_chart_newton(&cs, starts, seed)?;
        text.push_str(&format!("{} clusters from {starts} starts\n", clusters.len()));
        let mut items = Vec::new();
        for c in &clusters {
            let u: Matrix<f64> = chart_point_to_matrix(m, n, &c.center)?;
            let residual = cs.residual(&c.center).iter().fold(0.0f64, |a, r| a.max(r.abs()));
            text.push_str(&format!("{:?} x{} residual {residual:.1e}\n", c.center, c.multiplicity));
            items.push(json!({
                "center": c.center,
                "multiplicity": c.multiplicity,
                "residual": residual,
                "U": float_matrix_to_json(&u),
                "in_hypersurface": subspace_in_hypersurface(&u, &e)?,
            }));
        }
        outputs["starts"] = json!(starts);
        outputs["clusters"] = Value::Array(items);
    }
    Ok(Outcome::ok(outputs, text))
}

fn save_field(f: &Field2D, out: &Path) -> CliResult<Value> {
    f.save(out)?;
    let bytes = std::fs::read(out).map_err(|e| CliError::io(out, e))?;
    Ok(json!({"path": out.display().to_string(), "sha256": sha256_hex(&bytes)}))
}

fn field_summary(f: &Field2D) -> Value {
    json!({"n": f.n(), "norm_l2": f.norm_l2(), "max_abs": f.max_abs()})
}

pub fn sim(cmd: &SimCommand, inputs: &mut Inputs) -> CliResult<Outcome> {
    match cmd {
        SimCommand::Forward { star, phantom, n, out } => {
            let s = load_star(inputs, "star", star)?.to_f64();
            let spec = load_phantom(inputs, phantom)?;
            let f = make_phantom(&spec, &Domain2D::new(*n)?)?;
            let g = apply_star(&f, &s)?;
            let mut outputs = json!({"h": f.domain().h(), "phantom": field_summary(&f), "data": field_summary(&g)});
            if let Some(out) = out {
                outputs["written"] = save_field(&g, out)?;
            }
            let text = format!(
                "forward: N = {n}, |f| = {:.6e}, |Sf| = {:.6e}\n",
                f.norm_l2(),
                g.norm_l2()
            );
            Ok(Outcome::ok(outputs, text))
        }
        SimCommand::Invert {
            star,
            data,
            eps_reg,
            out,
            phantom,
            against,
        } => {
            let any = load_star(inputs, "star", star)?;
            let g = load_field(inputs, "data", data)?;
            if !star_injective(&any)? {
                let outputs = json!({"injective": false});
                return Ok(Outcome {
                    outputs,
                    text: "not injective: no inversion\n".into(),
                    exit: 1,
                });
            }
            let (f, method) = invert_star(&g, &any.to_f64(), *eps_reg)?;
            let mut outputs = json!({
                "injective": true,
                "method": serde_json::to_value(method).map_err(|e| CliError::Parse(e.to_string()))?,
                "recovered": field_summary(&f),
            });
            let mut text = format!("inverted with {method:?}\n");
            let reference = match (phantom, against) {
                (Some(p), _) => Some(make_phantom(&load_phantom(inputs, p)?, g.domain())?),
                (None, Some(a)) => Some(load_field(inputs, "against", a)?),
                (None, None) => None,
            };
            if let Some(r) = reference {
                let err = f.rel_l2_error(&r)?;
                outputs["rel_l2_error"] = json!(err);
                text.push_str(&format!("relative L2 error: {err:.6e}\n"));
            }
            if let Some(out) = out {
                outputs["written"] = save_field(&f, out)?;
            }
            Ok(Outcome::ok(outputs, text))
        }
        SimCommand::Nullcheck {
            star,
            phantom,
            n,
            against,
        } => {
            let any = load_star(inputs, "star", star)?;
            let f = make_phantom(&load_phantom(inputs, phantom)?, &Domain2D::new(*n)?)?;
            let res = null_residual(&any.to_f64(), &f)?;
            let mut outputs = json!({"n": n, "injective": star_injective(&any)?, "residual": res});
            let mut text = format!("null residual: {res:.6e}\n");
            if let Some(a) = against {
                let reference = load_star(inputs, "against", a)?;
                let ref_res = null_residual(&reference.to_f64(), &f)?;
                outputs["reference_residual"] = json!(ref_res);
                outputs["ratio"] = json!(res / ref_res);
                text.push_str(&format!(
                    "reference residual: {ref_res:.6e}\nratio: {:.6e}\n",
                    res / ref_res
                ));
            }
            Ok(Outcome::ok(outputs, text))
        }
    }
}
