use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use num_bigint::BigInt;
use serde_json::{json, Value};

use fixcalc_core::catalog::{self, Instance};
use fixcalc_core::homology::betti;
use fixcalc_core::index::{admissible, comb_index, comb_lefschetz, index_oracle_with_budget};
use fixcalc_core::integral::{integrable_wrt_index, integrate_levels, integrate_step};
use fixcalc_core::io;
use fixcalc_core::riemann::{
    is_index_strict, is_real_integrable, riemann_limit, riemann_lower_from_clusters, riemann_sequence, IndexStrictness,
};
use fixcalc_core::{
    euler_compact, fixed_clusters, lefschetz_homology, lefschetz_hopf, Complex, Error, SimplexSet, SimplicialMap,
    StepFunction, ValueFunction, Verdict,
};

use crate::report::{ClusterRow, Failure, RunReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_REJECTED: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

pub type CmdResult = Result<(), Failure>;

pub fn failure(code: i32, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

/// Input problems exit with 2; mathematical rejections with 3.
pub fn classify(e: &Error) -> i32 {
    match e {
        Error::Inadmissible(_)
        | Error::InadmissibleTerm { .. }
        | Error::NotIntegrable(_)
        | Error::NotIndexStrict
        | Error::NonConstantCluster(_)
        | Error::NotInvariant(_)
        | Error::NotAutomorphism(_)
        | Error::NotIsomorphism(_)
        | Error::ClosureNotInvariant
        | Error::BudgetExceeded(_)
        | Error::ProductNotSimplicial(_) => EXIT_REJECTED,
        _ => EXIT_INPUT,
    }
}

fn core_failure(context: &str, e: Error) -> Failure {
    failure(classify(&e), format!("{context}: {e}"))
}

fn read(report: &mut RunReport, role: &str, path: &Path) -> Result<String, Failure> {
    let bytes = fs::read(path).map_err(|e| failure(EXIT_INPUT, format!("{}: {e}", path.display())))?;
    report.add_input(role, &path.display().to_string(), &bytes);
    String::from_utf8(bytes).map_err(|_| failure(EXIT_INPUT, format!("{}: not UTF-8", path.display())))
}

fn load_complex(report: &mut RunReport, path: &Path) -> Result<Arc<Complex>, Failure> {
    let text = read(report, "complex", path)?;
    let x = io::parse_complex(&text).map_err(|e| core_failure(&path.display().to_string(), e))?;
    if x.is_empty() {
        return Err(failure(EXIT_INPUT, format!("{}: empty complex", path.display())));
    }
    Ok(Arc::new(x))
}

fn load_map(report: &mut RunReport, path: &Path, x: &Arc<Complex>) -> Result<SimplicialMap, Failure> {
    let text = read(report, "map", path)?;
    io::parse_map(&text, x, x).map_err(|e| core_failure(&path.display().to_string(), e))
}

fn load_set(report: &mut RunReport, role: &str, path: &Path, x: &Arc<Complex>) -> Result<SimplexSet, Failure> {
    let text = read(report, role, path)?;
    io::parse_set(&text, x).map_err(|e| core_failure(&path.display().to_string(), e))
}

fn add_clusters(report: &mut RunReport, f: &SimplicialMap) {
    report.clusters = fixed_clusters(f).iter().map(ClusterRow::from_cluster).collect();
}

fn strings<T: ToString>(items: &[T]) -> Value {
    Value::Array(items.iter().map(|v| Value::String(v.to_string())).collect())
}

pub fn lefschetz(report: &mut RunReport, complex: &Path, map: &Path, set: Option<&Path>) -> CmdResult {
    let x = load_complex(report, complex)?;
    let f = load_map(report, map, &x)?;
    let (hopf, homology) = (lefschetz_hopf(&f), lefschetz_homology(&f));
    report.result("lefschetz_hopf", hopf.to_string());
    report.result("lefschetz_homology", homology.to_string());
    add_clusters(report, &f);
    if hopf != homology {
        return Err(failure(
            EXIT_INTERNAL,
            format!("chain trace {hopf} differs from homology trace {homology}"),
        ));
    }
    if let Some(path) = set {
        let u = load_set(report, "set", path, &x)?;
        let l = comb_lefschetz(&f, &u).map_err(|e| core_failure("combinatorial Lefschetz number", e))?;
        report.result("comb_lefschetz", l.to_string());
    }
    Ok(())
}

pub fn index(report: &mut RunReport, complex: &Path, map: &Path, set: &Path, oracle: bool, budget: usize) -> CmdResult {
    let x = load_complex(report, complex)?;
    let f = load_map(report, map, &x)?;
    let a = load_set(report, "set", set, &x)?;
    add_clusters(report, &f);
    if let Verdict::Inadmissible(s) = admissible(&f, &a).verdict {
        report.verdict("admissible", format!("no: fixed simplex {} in the frontier", s.simplex));
        return Err(core_failure("index", Error::Inadmissible(s.simplex)));
    }
    report.verdict("admissible", "yes");
    let i = comb_index(&f, &a).map_err(|e| core_failure("index", e))?;
    report.result("comb_index", i.to_string());
    if oracle {
        let o = index_oracle_with_budget(&f, &a, budget).map_err(|e| core_failure("oracle", e))?;
        report.result("index_oracle", o.to_string());
        if o != i {
            return Err(failure(
                EXIT_INTERNAL,
                format!("oracle gives {o}, combinatorial index {i}"),
            ));
        }
    }
    Ok(())
}

pub fn integrate(report: &mut RunReport, complex: &Path, map: &Path, function: &Path) -> CmdResult {
    let x = load_complex(report, complex)?;
    let f = load_map(report, map, &x)?;
    let text = read(report, "function", function)?;
    let base = function.parent().map(Path::to_path_buf).unwrap_or_default();
    let mut sets = Vec::new();
    let parsed = io::parse_step_function(&text, &x, |p| {
        let path = base.join(p);
        let contents = fs::read_to_string(&path).map_err(|e| Error::Parse {
            line: 0,
            message: format!("{}: {e}", path.display()),
        })?;
        sets.push((p.to_string(), contents.clone()));
        io::parse_set(&contents, &x)
    });
    for (p, contents) in &sets {
        report.add_input("term", p, contents.as_bytes());
    }
    let (h, paths) = parsed.map_err(|e| core_failure(&function.display().to_string(), e))?;
    integrate_checked(report, &h, &paths, &f)
}

fn integrate_checked(report: &mut RunReport, h: &StepFunction, paths: &[String], f: &SimplicialMap) -> CmdResult {
    if let Err(e) = integrable_wrt_index(h, f) {
        report.verdict("integrable", "no");
        return Err(core_failure("integrate", e));
    }
    report.verdict("integrable", "yes");
    let terms: Vec<Value> = h
        .terms()
        .iter()
        .zip(paths)
        .map(|((c, u), p)| {
            let i = comb_index(f, u).expect("integrable terms are admissible");
            json!({ "coeff": c.to_string(), "set": p, "index": i.to_string() })
        })
        .collect();
    report.result("terms", terms);
    let total = integrate_step(h, f).map_err(|e| core_failure("integrate", e))?;
    let by_levels = integrate_levels(h, f).map_err(|e| core_failure("integrate", e))?;
    report.result("integral", total.to_string());
    if total != by_levels {
        return Err(failure(
            EXIT_INTERNAL,
            format!("level-set formula gives {by_levels}, terms give {total}"),
        ));
    }
    Ok(())
}

pub fn riemann(
    report: &mut RunReport,
    complex: &Path,
    map: &Path,
    function: &Path,
    levels: u32,
    upper: bool,
) -> CmdResult {
    let x = load_complex(report, complex)?;
    let f = load_map(report, map, &x)?;
    let text = read(report, "function", function)?;
    let h = io::parse_value_function(&text, &x).map_err(|e| core_failure(&function.display().to_string(), e))?;
    add_clusters(report, &f);
    let strict = is_index_strict(&f);
    report.verdict("index_strict", strict.to_string());
    match is_real_integrable(&h, &f) {
        Ok(()) => report.verdict("integrable", "yes"),
        Err(v) => {
            report.verdict("integrable", format!("no: {v}"));
            return Err(core_failure("riemann", Error::NotIntegrable(v.to_string())));
        }
    }
    if strict == IndexStrictness::Neither {
        return Err(core_failure("riemann", Error::NotIndexStrict));
    }
    let seq = riemann_sequence(&h, &f, levels, upper).map_err(|e| core_failure("riemann", e))?;
    let limit = riemann_limit(&h, &f).map_err(|e| core_failure("riemann", e))?;
    report.result("kind", if upper { "upper" } else { "lower" });
    report.result("sequence", strings(&seq));
    report.result("limit", limit.to_string());
    if !upper {
        let direct = riemann_lower_from_clusters(&h, &f, levels).map_err(|e| core_failure("riemann", e))?;
        if Some(&direct) != seq.last() {
            return Err(failure(
                EXIT_INTERNAL,
                format!("cluster formula gives {direct} at n = {levels}"),
            ));
        }
    }
    Ok(())
}

pub fn betti_numbers(report: &mut RunReport, complex: &Path) -> CmdResult {
    let x = load_complex(report, complex)?;
    report.result("betti", strings(&betti(&x)));
    report.result("euler", euler_compact(&x).to_string());
    Ok(())
}

#[derive(Clone, Copy, Debug)]
pub enum ExampleName {
    SphereReflection(usize),
    SphereRotation(usize),
    PathReflection,
}

fn write_file(report: &mut RunReport, dir: &Path, name: &str, contents: &str) -> Result<PathBuf, Failure> {
    let path = dir.join(name);
    fs::write(&path, contents).map_err(|e| failure(EXIT_INPUT, format!("{}: {e}", path.display())))?;
    report.add_input("written", name, contents.as_bytes());
    Ok(path)
}

/// Writes the instance and rereads every file, failing if anything changes.
pub fn example(report: &mut RunReport, which: ExampleName, out: &Path) -> CmdResult {
    let inst: Instance = match which {
        ExampleName::SphereReflection(m) => catalog::sphere_reflection(m),
        ExampleName::SphereRotation(m) => catalog::sphere_rotation(m),
        ExampleName::PathReflection => Ok(catalog::path_reflection()),
    }
    .map_err(|e| core_failure("example", e))?;
    fs::create_dir_all(out).map_err(|e| failure(EXIT_INPUT, format!("{}: {e}", out.display())))?;
    let x = inst.complex();
    let mismatch = |what: &str| failure(EXIT_INTERNAL, format!("{what} does not reparse to the same value"));

    write_file(report, out, "complex.txt", &io::write_complex(x))?;
    write_file(report, out, "map.txt", &io::write_map(&inst.map))?;
    let y = Arc::new(io::parse_complex(&io::write_complex(x)).map_err(|e| core_failure("complex", e))?);
    if y != *x || io::parse_map(&io::write_map(&inst.map), x, x).ok().as_ref() != Some(&inst.map) {
        return Err(mismatch("complex or map"));
    }
    let mut files = vec!["complex.txt".to_string(), "map.txt".to_string()];
    for (name, set) in &inst.sets {
        let file = format!("{name}.txt");
        write_file(report, out, &file, &io::write_set(set))?;
        if io::parse_set(&io::write_set(set), x).ok().as_ref() != Some(set) {
            return Err(mismatch(&file));
        }
        files.push(file);
    }
    if let ExampleName::SphereRotation(_) = which {
        let terms = [
            (BigInt::from(3), "star-N.txt".to_string()),
            (BigInt::from(4), "star-S.txt".to_string()),
        ];
        write_file(report, out, "steps.txt", &io::write_step_function(&terms))?;
        files.push("steps.txt".into());
    }
    if let Some(h) = &inst.values {
        write_file(report, out, "values.txt", &io::write_value_function(h))?;
        if io::parse_value_function(&io::write_value_function(h), x).ok().as_ref() != Some::<&ValueFunction>(h) {
            return Err(mismatch("values.txt"));
        }
        files.push("values.txt".into());
    }
    report.result("instance", inst.name.clone());
    report.result("directory", out.display().to_string());
    report.result("files", strings(&files));
    Ok(())
}
