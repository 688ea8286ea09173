#![allow(dead_code)]

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use collabdist::pipeline::PipelineConfig;

pub fn toy_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/toy")
}

/// The bundled toy configuration with its output redirected to `out`.
pub fn toy_config(out: &Path) -> PipelineConfig {
    let mut config = PipelineConfig::load(&toy_dir().join("config.toml")).expect("toy config");
    config.out = out.to_path_buf();
    config
}

/// Every file under `dir`, keyed by relative path.
pub fn tree(dir: &Path) -> BTreeMap<String, Vec<u8>> {
    let mut out = BTreeMap::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for entry in std::fs::read_dir(&d).unwrap() {
            let path = entry.unwrap().path();
            if path.is_dir() {
                stack.push(path);
            } else {
                let rel = path.strip_prefix(dir).unwrap().to_string_lossy().into_owned();
                out.insert(rel, std::fs::read(&path).unwrap());
            }
        }
    }
    out
}

fn cells_match(a: &str, b: &str) -> bool {
    if a == b {
        return true;
    }
    match (a.parse::<f64>(), b.parse::<f64>()) {
        (Ok(x), Ok(y)) => (x - y).abs() <= 1e-9 * x.abs().max(1.0),
        _ => false,
    }
}

/// Compares each golden CSV with the file of the same name in `out`: same
/// shape and headers, cells equal as text or numerically within 1e-9
/// relative. Returns one message per discrepancy.
pub fn golden_mismatches(out: &Path) -> Vec<String> {
    let golden = toy_dir().join("golden");
    let mut problems = Vec::new();
    let mut names: Vec<PathBuf> = std::fs::read_dir(&golden)
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|e| e == "csv"))
        .collect();
    names.sort();
    for expected_path in names {
        let name = expected_path.file_name().unwrap().to_string_lossy().into_owned();
        let Ok(actual) = std::fs::read_to_string(out.join(&name)) else {
            problems.push(format!("{name}: not produced"));
            continue;
        };
        let expected = std::fs::read_to_string(&expected_path).unwrap();
        if actual == expected {
            continue;
        }
        let parse = |text: &str| -> Vec<Vec<String>> {
            csv::ReaderBuilder::new()
                .has_headers(false)
                .from_reader(text.as_bytes())
                .records()
                .map(|r| r.unwrap().iter().map(str::to_string).collect())
                .collect()
        };
        let (a, e) = (parse(&actual), parse(&expected));
        if a.len() != e.len() {
            problems.push(format!("{name}: {} rows, expected {}", a.len(), e.len()));
            continue;
        }
        for (i, (ra, re)) in a.iter().zip(&e).enumerate() {
            if ra.len() != re.len() || ra.iter().zip(re).any(|(x, y)| !cells_match(x, y)) {
                problems.push(format!("{name} line {}: {:?} != {:?}", i + 1, ra, re));
            }
        }
    }
    problems
}

fn close(actual: f64, expected: f64, rel: f64) -> bool {
    (actual - expected).abs() <= rel * expected.abs().max(1.0)
}

/// Compares `regression_report.json` in `out` with the oracle's numbers.
/// OLS must agree to 1e-9; ZIBeta estimates to 1e-5 and standard errors to
/// 1e-4 (both relative), since each side uses its own optimizer and
/// numerical Hessian.
pub fn regression_mismatches(out: &Path) -> Vec<String> {
    let oracle: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(toy_dir().join("golden/regression_oracle.json")).unwrap())
            .unwrap();
    let report: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(out.join("regression_report.json")).unwrap()).unwrap();
    let mut problems = Vec::new();
    let mut check = |label: String, actual: &serde_json::Value, expected: &serde_json::Value, rel: f64| match (
        actual.as_f64(),
        expected.as_f64(),
    ) {
        (Some(a), Some(e)) if close(a, e, rel) => {}
        _ => problems.push(format!("{label}: {actual} vs oracle {expected}")),
    };
    let column = |v: &serde_json::Value, key: &str| -> Vec<serde_json::Value> {
        v.as_array().unwrap().iter().map(|c| c[key].clone()).collect()
    };

    let ols = &report["full"]["ols"];
    for (key, okey) in [("estimate", "estimate"), ("se", "se"), ("p", "p")] {
        for (i, (a, e)) in column(&ols["coefficients"], key)
            .iter()
            .zip(oracle["ols"][okey].as_array().unwrap())
            .enumerate()
        {
            check(format!("OLS {key}[{i}]"), a, e, 1e-9);
        }
    }
    check(
        "OLS logL".into(),
        &ols["log_likelihood"],
        &oracle["ols"]["log_likelihood"],
        1e-9,
    );
    check("OLS AIC".into(), &ols["aic"], &oracle["ols"]["aic"], 1e-9);
    check("OLS R2".into(), &ols["pseudo_r2"], &oracle["ols"]["r2"], 1e-9);

    let zb = &report["full"]["zibeta"];
    for (block, okey, sekey) in [
        ("coefficients", "estimate", "se"),
        ("zero_coefficients", "zero_estimate", "zero_se"),
    ] {
        for (i, (a, e)) in column(&zb[block], "estimate")
            .iter()
            .zip(oracle["zibeta"][okey].as_array().unwrap())
            .enumerate()
        {
            check(format!("ZIBeta {block} estimate[{i}]"), a, e, 1e-5);
        }
        for (i, (a, e)) in column(&zb[block], "se")
            .iter()
            .zip(oracle["zibeta"][sekey].as_array().unwrap())
            .enumerate()
        {
            check(format!("ZIBeta {block} se[{i}]"), a, e, 1e-4);
        }
    }
    check("ZIBeta phi".into(), &zb["phi"], &oracle["zibeta"]["phi"], 1e-5);
    check(
        "ZIBeta log_phi_se".into(),
        &zb["log_phi_se"],
        &oracle["zibeta"]["log_phi_se"],
        1e-4,
    );
    check(
        "ZIBeta logL".into(),
        &zb["log_likelihood"],
        &oracle["zibeta"]["log_likelihood"],
        1e-9,
    );
    check("ZIBeta AIC".into(), &zb["aic"], &oracle["zibeta"]["aic"], 1e-9);

    let panel = report["panel"].as_array().cloned().unwrap_or_default();
    let periods = oracle["periods"].as_array().unwrap();
    if panel.len() != periods.len() {
        problems.push(format!("panel has {} periods, oracle {}", panel.len(), periods.len()));
    }
    for (p, o) in panel.iter().zip(periods) {
        if p["period"]["label"] != o["label"]
            || p["n_papers"] != o["n_papers"]
            || p["n_international"] != o["n_international"]
        {
            problems.push(format!("period counts differ: {} vs oracle {}", p, o));
        }
    }
    problems
}
