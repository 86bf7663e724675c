//! One function per subcommand, each returning a [`Report`].

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use num_traits::{Signed, Zero};
use orbiweyl_core::capped_orbits::spec_k;
use orbiweyl_core::flow_complex::{
    build_differential, parse_class, random_consistent_category, spectral_invariant, verify_d_squared,
    RandomCategoryOptions,
};
use orbiweyl_core::novikov::DEFAULT_WORKING_TRUNCATION;
use orbiweyl_core::orbifold_cohomology::{cr_betti_table_p1, sector_betti_p1, sectors as cr_sectors};
use orbiweyl_core::potential::{analyze_link, weyl_certificate, LinkConfig};
use orbiweyl_core::quantum_algebra::{
    analyze_symmetric_p1, element_terms, weyl_idempotent_predicate, AlgebraElement, TrendPolicy,
};
use orbiweyl_core::quasimorphism::{
    closure_expression, commutator_bound_check, commutator_constant, commutator_expression, defect,
    eq16_bound_check, random_functions, tightness_probe, ConjugateFactor, FiniteGroupTable, DEFAULT_DEPTH_CAP,
};
use orbiweyl_core::{int, NovikovSeries, Rational, Valuation};
use serde::de::DeserializeOwned;
use serde_json::{json, Value};

use crate::files::{CategoryFile, SpectrumFile};
use crate::rule::Rule;
use crate::table::Table;
use crate::{CliError, PotentialArgs, Report};

fn verdict_word(pass: bool) -> &'static str {
    if pass {
        "PASS"
    } else {
        "FAIL"
    }
}

fn q(x: &Rational) -> String {
    x.to_string()
}

fn val_json(v: &Valuation) -> Value {
    match v {
        Valuation::Finite(x) => json!(q(x)),
        Valuation::Infinity => json!("inf"),
    }
}

fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io { path: path.into(), source })?;
    serde_json::from_str(&text).map_err(|source| CliError::Json { path: path.into(), source })
}

fn positive(name: &str, n: usize) -> Result<(), CliError> {
    if n == 0 {
        return Err(CliError::Input(format!("--{name} must be at least 1")));
    }
    Ok(())
}

pub fn sectors(k: usize, dim: usize) -> Result<Report, CliError> {
    positive("k", k)?;
    positive("dim", dim)?;
    let on_sphere = dim == 1;
    let mut table = Table::new(["partition", "cycles", "age", "centralizer", "rank", "degrees"]);
    let mut rows = Vec::new();
    for s in cr_sectors(k, dim) {
        let parts: Vec<String> = s.partition.parts().iter().map(ToString::to_string).collect();
        let betti = on_sphere.then(|| sector_betti_p1(&s.partition));
        let rank = betti.as_ref().map(|b| b.total_rank());
        let range = betti.as_ref().and_then(|b| Some((b.min_degree()?.clone(), b.max_degree()?.clone())));
        table.row(vec![
            format!("({})", parts.join(",")),
            s.cycle_count.to_string(),
            q(&s.age),
            s.centralizer_order.to_string(),
            rank.map_or("-".into(), |r| r.to_string()),
            range.as_ref().map_or("-".into(), |(lo, hi)| format!("{lo}..{hi}")),
        ]);
        rows.push(json!({
            "partition": s.partition.parts(),
            "cycles": s.cycle_count,
            "age": q(&s.age),
            "centralizer_order": s.centralizer_order.to_string(),
            "fixed_dim": s.fixed_dim,
            "rank": rank,
            "degree_range": range.map(|(lo, hi)| [q(&lo), q(&hi)]),
        }));
    }
    let mut text = format!("Chen-Ruan sectors of Sym^{k} of a complex {dim}-fold\n");
    text.push_str(&table.render());
    let mut betti_json = Value::Null;
    let mut total = Value::Null;
    if on_sphere {
        let betti = cr_betti_table_p1(k);
        let mut bt = Table::new(["degree", "rank"]);
        for (d, r) in betti.ranks() {
            bt.row(vec![q(d), r.to_string()]);
        }
        let _ = write!(text, "\nBetti numbers of Sym^{k}(P^1)\n{}total rank {}\n", bt.render(), betti.total_rank());
        betti_json = betti.ranks().iter().map(|(d, r)| json!({"degree": q(d), "rank": r})).collect();
        total = json!(betti.total_rank());
    }
    let json = json!({"k": k, "dim": dim, "sectors": rows, "betti": betti_json, "total_rank": total});
    Ok(Report { verdict: None, text, json })
}

/// The idempotent of largest valuation, i.e. the one closest to the unit.
fn best_idempotent<'a>(es: &'a [AlgebraElement], vals: &[Valuation]) -> Option<&'a AlgebraElement> {
    let mut best: Option<(usize, &Valuation)> = None;
    for (i, v) in vals.iter().enumerate() {
        if best.map_or(true, |(_, b)| v > b) {
            best = Some((i, v));
        }
    }
    best.map(|(i, _)| &es[i])
}

fn coordinates(terms: &BTreeMap<usize, (String, NovikovSeries)>) -> String {
    terms.values().map(|(label, c)| format!("({c})*[{label}]")).collect::<Vec<_>>().join(" + ")
}

pub fn idempotents(k: usize, omega: &Rational, trunc: Option<&Rational>) -> Result<Report, CliError> {
    positive("k", k)?;
    if !omega.is_positive() {
        return Err(CliError::Input("--omega must be positive".into()));
    }
    let working = trunc.cloned().unwrap_or_else(|| int(DEFAULT_WORKING_TRUNCATION));
    let analyses = (1..=k).map(|j| analyze_symmetric_p1(j, omega, &working)).collect::<Result<Vec<_>, _>>()?;
    let last = analyses.last().expect("k >= 1");
    let alg = &last.algebra.algebra;

    let mut text = format!(
        "Idempotents of the Sym_{k}-invariant part of QH(P^1)^(x{k}), omega = {omega}, dimension {}\n",
        alg.dim()
    );
    let mut list = Table::new(["idempotent", "valuation", "grade", "coordinates"]);
    let mut list_json = Vec::new();
    for (i, e) in last.idempotents.iter().enumerate() {
        let terms = element_terms(alg, e);
        let grade = last.grades[i].as_ref().ok();
        list.row(vec![
            format!("e{}", i + 1),
            last.valuations[i].to_string(),
            grade.map_or("none".into(), q),
            coordinates(&terms),
        ]);
        list_json.push(json!({
            "valuation": val_json(&last.valuations[i]),
            "grade": grade.map(q),
            "coordinates": terms.values().map(|(l, c)| json!({"basis": l, "coefficient": c.to_string()})).collect::<Vec<_>>(),
        }));
    }
    text.push_str(&list.render());

    let family: Vec<_> = analyses
        .iter()
        .map(|a| {
            let e = best_idempotent(&a.idempotents, &a.valuations).ok_or(CliError::Input(format!("no idempotents for k = {}", a.k)))?;
            Ok((a.k, &a.algebra.algebra, e))
        })
        .collect::<Result<_, CliError>>()?;
    let report = weyl_idempotent_predicate(&family, &TrendPolicy::default(), &working)?;
    let passed = report.passed();
    let mut fam = Table::new(["k", "idempotents", "rank e*A", "val e", "val e / k"]);
    let mut fam_json = Vec::new();
    for (row, a) in report.rows.iter().zip(&analyses) {
        let ratio = row.ratio.as_ref().map(q);
        fam.row(vec![
            row.k.to_string(),
            a.idempotents.len().to_string(),
            row.summand_rank.to_string(),
            row.valuation.to_string(),
            ratio.clone().unwrap_or_else(|| "-".into()),
        ]);
        fam_json.push(json!({
            "k": row.k,
            "idempotents": a.idempotents.len(),
            "summand_rank": row.summand_rank,
            "valuation": val_json(&row.valuation),
            "ratio": ratio,
        }));
    }
    let _ = write!(
        text,
        "\nFamily k = 1..{k}, idempotent of largest valuation at each k\n{}rank-one summands: {}\nval(e_k)/k -> 0: {}\nverdict: {}\n",
        fam.render(),
        yes_no(report.all_field_summands),
        yes_no(report.sublinear),
        verdict_word(passed)
    );
    let json = json!({
        "k": k,
        "omega": q(omega),
        "truncation": q(&working),
        "dimension": alg.dim(),
        "idempotents": list_json,
        "family": fam_json,
        "rank_one_summands": report.all_field_summands,
        "sublinear": report.sublinear,
        "verdict": verdict_word(passed),
    });
    Ok(Report { verdict: Some(passed), text, json })
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

pub fn potential(args: &PotentialArgs, trunc: Option<&Rational>) -> Result<Report, CliError> {
    let mut cfg = match &args.a {
        Some(a) => LinkConfig::new(args.k, args.b.clone(), a.clone()),
        None => LinkConfig::from_total_area(args.k, args.b.clone(), Rational::from_integer(1.into())),
    };
    cfg.gamma = args.gamma.clone();
    let report = analyze_link(&cfg, args.target_val.as_ref())?;
    let show = |x: &NovikovSeries| match trunc {
        Some(t) => x.truncate(t).to_string(),
        None => x.to_string(),
    };
    let coords: Vec<String> = report.critical_point.coordinates.iter().map(|c| show(c)).collect();
    let h = &report.hessian;
    let expected = report.expected_valuation();
    let passed = report.all_leading_morse && h.valuation == expected;
    let mut text = String::new();
    let mut t = Table::new(["field", "value"]);
    let mut kv = |k: &str, v: String| t.row(vec![k.into(), v]);
    kv("k", args.k.to_string());
    kv("B", q(&cfg.b));
    kv("A", q(&cfg.a));
    kv("gamma", q(&cfg.gamma));
    kv("leading critical points", report.leading_points.to_string());
    kv("all Morse", yes_no(report.all_leading_morse).into());
    kv("gradient valuation", report.critical_point.gradient_valuation.to_string());
    for (j, c) in coords.iter().enumerate() {
        kv(&format!("z{}", j + 1), c.clone());
    }
    kv("det Hess", show(&h.det));
    kv("val det Hess", q(&h.valuation));
    kv("k*B", q(&expected));
    kv("Z leading", h.leading.to_string());
    kv("defect bound", q(report.defect_bound()));
    kv("verdict", verdict_word(passed).into());
    text.push_str(&t.render());
    let json = json!({
        "k": args.k,
        "B": q(&cfg.b),
        "A": q(&cfg.a),
        "critical_point": coords,
        "hess_det": show(&h.det),
        "hess_det_val": q(&h.valuation),
        "Z_leading": h.leading.to_string(),
        "defect_bound": q(report.defect_bound()),
        "verdict": verdict_word(passed),
    });
    Ok(Report { verdict: Some(passed), text, json })
}

pub fn weyl(rule: &str, k_min: usize, k_max: usize) -> Result<Report, CliError> {
    positive("k-min", k_min)?;
    if k_max < k_min {
        return Err(CliError::Input("--k-max must be at least --k-min".into()));
    }
    let rule = Rule::parse(rule)?;
    let ks: Vec<usize> = (k_min..=k_max).collect();
    let bs: BTreeMap<usize, Rational> = ks.iter().map(|&k| Ok((k, rule.eval(k)?))).collect::<Result<_, CliError>>()?;
    let cert = weyl_certificate(|k| bs[&k].clone(), &ks)?;
    let mut t = Table::new(["k", "B_k", "A_k", "val detHess", "ratio", "law", "Morse", "admissible"]);
    let mut rows = Vec::new();
    for r in &cert.rows {
        t.row(vec![
            r.k.to_string(),
            q(&r.b),
            q(&r.a),
            q(&r.hess_det_val),
            q(&r.ratio),
            yes_no(r.matches_law).into(),
            yes_no(r.morse).into(),
            yes_no(r.admissible).into(),
        ]);
        rows.push(json!({
            "k": r.k,
            "B": q(&r.b),
            "A": q(&r.a),
            "hess_det_val": q(&r.hess_det_val),
            "ratio": q(&r.ratio),
            "matches_law": r.matches_law,
            "morse": r.morse,
            "admissible": r.admissible,
            "defect_bound": q(&r.defect_bound),
        }));
    }
    let text = format!("B_k = {}, total area 1\n{}verdict: {}\n", rule.source(), t.render(), verdict_word(cert.verdict));
    let json = json!({"rule": rule.source(), "rows": rows, "verdict": verdict_word(cert.verdict)});
    Ok(Report { verdict: Some(cert.verdict), text, json })
}

pub fn flow_verify(seed: u64, count: u64, size: usize, depth: usize, gamma_swap: bool, emit: Option<&Path>) -> Result<Report, CliError> {
    positive("size", size)?;
    if count == 0 {
        return Err(CliError::Input("--count must be at least 1".into()));
    }
    let opts = RandomCategoryOptions { size, depth, gamma_swap };
    let mut t = Table::new(["seed", "generators", "counts", "max k", "identity", "D(alpha)^2"]);
    let mut rows = Vec::new();
    let mut all = true;
    for s in seed..seed.saturating_add(count) {
        let cat = random_consistent_category(s, opts);
        if s == seed {
            if let Some(path) = emit {
                let mut body = serde_json::to_string_pretty(&CategoryFile::from_category(&cat)).expect("category serializes");
                body.push('\n');
                std::fs::write(path, body).map_err(|source| CliError::Io { path: path.into(), source })?;
            }
        }
        let rep = verify_d_squared(&cat);
        all &= rep.passed();
        let violation = rep.identity_violation.map(|(p, q, k, m)| {
            let id = |i: usize| cat.generators[i].id.clone();
            (id(p), id(q), k, m)
        });
        t.row(vec![
            s.to_string(),
            cat.len().to_string(),
            cat.counts.len().to_string(),
            cat.max_k().to_string(),
            violation.as_ref().map_or("ok".into(), |(p, q, k, m)| format!("fails at ({p}, {q}, {k}, {m})")),
            if rep.matrix_failures.is_empty() { "ok".into() } else { format!("nonzero for {} alpha", rep.matrix_failures.len()) },
        ]);
        rows.push(json!({
            "seed": s,
            "generators": cat.len(),
            "counts": cat.counts.len(),
            "max_k": cat.max_k(),
            "identity_violation": violation.map(|(p, q, k, m)| json!({"from": p, "to": q, "k": k, "shift": m})),
            "matrix_failures": rep.matrix_failures.iter().map(ToString::to_string).collect::<Vec<_>>(),
        }));
    }
    let text = format!("{}verdict: {}\n", t.render(), verdict_word(all));
    let json = json!({"size": size, "depth": depth, "gamma_swap": gamma_swap, "rows": rows, "verdict": verdict_word(all)});
    Ok(Report { verdict: Some(all), text, json })
}

pub fn flow_spectral(input: &Path, class: &str, alpha: &str) -> Result<Report, CliError> {
    let file: CategoryFile = read_json(input)?;
    let cat = file.to_category()?;
    let alpha: NovikovSeries = alpha.parse()?;
    let complex = build_differential(&cat, &alpha)?;
    let x = parse_class(&complex, class)?;
    let level = complex.level_of(&x);
    let c = spectral_invariant(&complex, &x)?;
    let show = |v: &Option<Rational>, none: &str| v.as_ref().map_or(none.to_string(), q);
    let mut t = Table::new(["field", "value"]);
    t.row(vec!["class".into(), class.trim().into()]);
    t.row(vec!["alpha".into(), alpha.to_string()]);
    t.row(vec!["level".into(), show(&level, "-inf")]);
    t.row(vec!["spectral invariant".into(), show(&c, "-inf (boundary)")]);
    let json = json!({
        "class": class.trim(),
        "alpha": alpha.to_string(),
        "level": level.as_ref().map(q),
        "spectral_invariant": c.as_ref().map(q),
        "boundary": c.is_none(),
    });
    Ok(Report { verdict: None, text: t.render(), json })
}

pub fn spec(path: &Path, k: usize) -> Result<Report, CliError> {
    let file: SpectrumFile = read_json(path)?;
    let table = file.to_table()?;
    let values = spec_k(&table, k)?;
    let mut text = format!("Spec_{k}: {} values\n", values.len());
    for v in &values {
        text.push_str(&q(v));
        text.push('\n');
    }
    let json = json!({"k": k, "val_v": file.val_v.trim(), "values": values.iter().map(q).collect::<Vec<_>>()});
    Ok(Report { verdict: None, text, json })
}

fn parse_group(name: &str) -> Result<FiniteGroupTable, CliError> {
    let lower = name.trim().to_ascii_lowercase();
    let cyclic = lower.strip_prefix("cyclic").or_else(|| lower.strip_prefix('z'));
    match (lower.as_str(), cyclic) {
        ("a5", _) => Ok(FiniteGroupTable::a5()),
        ("trivial", _) => Ok(FiniteGroupTable::trivial()),
        (_, Some(n)) => match n.parse::<usize>() {
            Ok(n) if n >= 1 => Ok(FiniteGroupTable::cyclic(n)),
            _ => Err(CliError::Input(format!("bad cyclic order in `{name}`"))),
        },
        _ => Err(CliError::Input(format!("unknown group `{name}`; use a5, trivial or z<n>"))),
    }
}

/// The first element whose normal closure is the whole group, with an
/// expression of every element as a product of its conjugates.
fn normal_generator(g: &FiniteGroupTable) -> Result<(Option<usize>, Vec<Vec<ConjugateFactor>>), CliError> {
    if g.order() == 1 {
        let e = closure_expression(g, &[], g.identity(), DEFAULT_DEPTH_CAP)?;
        return Ok((None, vec![e]));
    }
    for f in (0..g.order()).filter(|&f| f != g.identity()) {
        let exprs: Result<Vec<_>, _> = (0..g.order()).map(|x| closure_expression(g, &[f], x, DEFAULT_DEPTH_CAP)).collect();
        if let Ok(exprs) = exprs {
            return Ok((Some(f), exprs));
        }
    }
    Err(CliError::Input("no single element normally generates the group".into()))
}

pub fn qm(group: &str, samples: usize, seed: u64) -> Result<Report, CliError> {
    let g = parse_group(group)?;
    let constant = commutator_constant(&g)?;
    let (generator, closure) = normal_generator(&g)?;
    let commutators = (0..g.order())
        .map(|x| commutator_expression(&g, x, DEFAULT_DEPTH_CAP))
        .collect::<Result<Vec<_>, _>>()?;
    let functions = random_functions(&g, samples, seed);
    let mut t = Table::new(["sample", "defect", "sup-norm", "bound", "margin", "checks"]);
    let mut rows = Vec::new();
    let mut failures = 0usize;
    let mut min_margin: Option<Rational> = None;
    for (i, mu) in functions.iter().enumerate() {
        let d = defect(&g, mu)?;
        let sup = mu.iter().map(Signed::abs).max().unwrap_or_else(Rational::zero);
        let bound = &d * int(constant);
        let margin = &bound - &sup;
        let mut checks = true;
        for x in 0..g.order() {
            checks &= eq16_bound_check(&g, mu, &closure[x], x)?;
            checks &= commutator_bound_check(&g, mu, x, &commutators[x])?;
        }
        let holds = checks && !margin.is_negative();
        failures += usize::from(!holds);
        if min_margin.as_ref().map_or(true, |m| &margin < m) {
            min_margin = Some(margin.clone());
        }
        t.row(vec![(i + 1).to_string(), q(&d), q(&sup), q(&bound), q(&margin), (if holds { "ok" } else { "FAIL" }).into()]);
        rows.push(json!({
            "sample": i + 1,
            "defect": q(&d),
            "sup_norm": q(&sup),
            "bound": q(&bound),
            "margin": q(&margin),
            "holds": holds,
        }));
    }
    let tightness = tightness_probe(&g, &functions)?;
    let passed = failures == 0;
    let generator_name = generator.map(|f| g.names()[f].clone());
    let mut text = t.render();
    let _ = write!(
        text,
        "\ngroup {} of order {}, C_G = {constant}, normal generator {}\nsamples {samples}, seed {seed}, failures {failures}\nminimum margin {}\nlargest |mu(g)|/((8N_g - 1)D) {}\nverdict: {}\n",
        group.trim(),
        g.order(),
        generator_name.as_deref().unwrap_or("-"),
        min_margin.as_ref().map_or("-".into(), q),
        q(&tightness),
        verdict_word(passed)
    );
    let json = json!({
        "group": group.trim(),
        "order": g.order(),
        "constant": constant,
        "normal_generator": generator_name,
        "samples": samples,
        "seed": seed,
        "rows": rows,
        "failures": failures,
        "min_margin": min_margin.as_ref().map(q),
        "tightness": q(&tightness),
        "verdict": verdict_word(passed),
    });
    Ok(Report { verdict: Some(passed), text, json })
}
