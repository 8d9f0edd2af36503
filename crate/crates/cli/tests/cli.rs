use std::collections::BTreeMap;
use std::process::Command;

use binomial_cayley::exactla::{PolytopeQuery, RatMatrix};
use binomial_cayley::particlebox::observe::kernel_measures;
use binomial_cayley::particlebox::{restrict, Distribution, Sigma, SystemSpec};
use binomial_cayley::rational::parse_rat;
use binomial_cayley::spectra::{cyclic_spectrum, SpectrumReport};
use binomial_cayley::Rat;
use bincay_cli::{parse_family_csv, parse_spectrum_csv, render, render_report, run, CommandResult, Format};
use serde_json::Value;

fn data(name: &str) -> String {
    format!("{}/../../data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn cli(args: &str) -> CommandResult {
    let r = run(std::iter::once("bincay").chain(args.split_whitespace()));
    let expected = match r.report.status.as_str() {
        "ok" | "verified" | "observable" | "help" => 0,
        "usage_error" => 2,
        "internal_error" => 3,
        _ => 1,
    };
    assert_eq!(r.exit_code, expected, "status {} for `{args}`", r.report.status);
    r
}

fn rats(v: &Value) -> Vec<Rat> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|x| parse_rat(x.as_str().unwrap()).unwrap())
        .collect()
}

#[test]
fn cyclic_spectrum_with_verification() {
    let r = cli("spectrum cyclic --m 2 --n 3 --k 2 --verify");
    assert_eq!(r.exit_code, 0);
    assert_eq!(r.report.status, "verified");
    let got: BTreeMap<String, u64> = r.report.data["entries"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e["eigenvalue"].as_str().unwrap().to_string(), e["multiplicity"].as_u64().unwrap()))
        .collect();
    let expected: BTreeMap<String, u64> =
        [("0", 1), ("2", 3), ("4", 3), ("6", 1)].iter().map(|(k, v)| (k.to_string(), *v)).collect();
    assert_eq!(got, expected);
    assert!(r.report.data["entries"][0]["contributors"].is_array());
}

#[test]
fn kernel_of_three_particles_in_two_boxes() {
    let r = cli("kernel --sigma all --n 3 --m 2 --k 2");
    assert_eq!(r.exit_code, 0);
    assert_eq!(r.report.data["dimension"], 1);
    assert_eq!(r.report.data["rank"], 7);
    let basis: Vec<Vec<Rat>> = r.report.data["basis"].as_array().unwrap().iter().map(rats).collect();
    let expected: Vec<Rat> = [1, -1, -1, 1, -1, 1, 1, -1].iter().map(|&x| Rat::from_integer(x.into())).collect();
    assert_eq!(basis, vec![expected]);
}

#[test]
fn kernel_of_bijections_matches_prediction() {
    let r = cli("kernel --sigma bij --m 4 --k 1");
    assert_eq!(r.report.status, "ok");
    assert_eq!(r.report.data["dimension"], r.report.data["predicted_dimension"]);
    assert_eq!(r.report.data["dimension"], 14);
}

#[test]
fn usage_errors() {
    let r = cli("spectrum sym --m 99 --k -1");
    assert_eq!(r.exit_code, 2);
    assert!(r.report.data["usage"].as_str().unwrap().contains("Usage"));
    assert_eq!(cli("spectrum sym --m 4 --k 1 --bogus").exit_code, 2);
    assert_eq!(cli("nonsense").exit_code, 2);
    assert_eq!(cli("kernel --sigma maybe --n 2 --m 2 --k 1").exit_code, 2);
    assert_eq!(cli("kernel --m 2 --k 1").exit_code, 2);
    assert_eq!(cli("kernel --sigma bij --n 3 --m 2 --k 1").exit_code, 2);
    assert_eq!(cli("restrict --n 2 --m 2 --k 1 --dist /nonexistent").exit_code, 2);
    let help = cli("--help");
    assert_eq!(help.exit_code, 0);
    assert!(help.help.unwrap().contains("verify-all"));
}

#[test]
fn size_guards_are_explicit() {
    let sym = cli("spectrum sym --m 8 --k 1 --verify");
    assert_eq!(sym.exit_code, 2);
    assert!(sym.report.data["error"].as_str().unwrap().contains("m ≤ 7"));
    // the closed form alone is not size limited
    assert_eq!(cli("spectrum sym --m 8 --k 1").exit_code, 0);
    let cyc = cli("spectrum cyclic --m 2 --n 13 --verify --k 1");
    assert_eq!(cyc.exit_code, 2);
    assert!(cyc.report.data["error"].as_str().unwrap().contains("4096"));
    assert_eq!(cli("kernel --n 13 --m 2 --k 1").exit_code, 2);
    assert_eq!(cli("lis-count --m 9").exit_code, 2);
}

#[test]
fn spectrum_round_trips() {
    let r = cli("spectrum cyclic --m 3 --n 2 --k 1");
    let json = render_report(&r, Format::Json).unwrap();
    let parsed: Value = serde_json::from_str(&json).unwrap();
    for key in ["command", "params", "status", "data", "provenance"] {
        assert!(parsed.get(key).is_some(), "missing {key}");
    }
    let back: SpectrumReport = serde_json::from_value(parsed["data"].clone()).unwrap();
    assert_eq!(back, cyclic_spectrum(3, 2, 1).unwrap());
    let csv = render_report(&r, Format::Csv).unwrap();
    assert!(csv.starts_with("eigenvalue,multiplicity\n"));
    assert_eq!(parse_spectrum_csv(&csv).unwrap(), back.pairs());
}

#[test]
fn custom_weights_show_non_nesting() {
    let w = data("z4_counterexample.weights");
    let k1 = cli(&format!("spectrum custom --weights {w} --k 1 --verify"));
    assert_eq!(k1.report.status, "verified");
    assert_eq!(k1.report.data["kernel_dim"], 0);
    let k2 = cli(&format!("spectrum custom --weights {w} --k 2 --verify"));
    assert_eq!(k2.report.status, "verified");
    assert_eq!(k2.report.data["kernel_dim"], 1);
}

#[test]
fn family_csv_round_trips() {
    let r = cli(&format!("restrict --n 2 --m 2 --k 1 --dist {} --format csv", data("two_box_first.dist")));
    let csv = render_report(&r, Format::Csv).unwrap();
    assert_eq!(csv, "i,j,value\n1,0,1\n1,1,0\n2,0,1\n2,1,0\n");
    let s = SystemSpec::new(2, 2, 1, Sigma::All).unwrap();
    let fam = parse_family_csv(&s, &csv).unwrap();
    assert_eq!(fam, restrict(&s, &Distribution::atom(&s, 0).unwrap().as_signed()).unwrap());

    let pairs = cli(&format!("restrict --n 3 --m 2 --k 2 --dist {} --format csv", data("three_uniform.dist")));
    assert_eq!(pairs.exit_code, 2, "missing file is an input error");
}

#[test]
fn family_json_round_trips() {
    let s = SystemSpec::new(3, 2, 2, Sigma::All).unwrap();
    let dir = std::env::temp_dir().join(format!("bincay-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("skewed.dist");
    std::fs::write(&path, "0,0,0 1/3\n0,1,1 1/6\n1,1,0 1/2\n").unwrap();
    let r = cli(&format!("restrict --n 3 --m 2 --k 2 --dist {}", path.display()));
    let json: Value = serde_json::from_str(&render_report(&r, Format::Json).unwrap()).unwrap();
    let entries = json["data"]["family"].as_object().unwrap().iter().map(|(k, v)| {
        (k.parse().unwrap(), parse_rat(v.as_str().unwrap()).unwrap())
    });
    let fam = binomial_cayley::particlebox::MarginalFamily::from_entries(s, entries).unwrap();
    let p = binomial_cayley::particlebox::files::parse_distribution(&s, &std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(fam, restrict(&s, &p.as_signed()).unwrap());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn degeneracy_of_two_boxes() {
    let uniform = cli("degeneracy --n 2 --m 2 --k 1");
    assert_eq!(uniform.report.data["dimension"], 1);
    let explicit = cli(&format!("degeneracy --n 2 --m 2 --k 1 --dist {}", data("two_box_uniform.dist")));
    assert_eq!(explicit.report.data, uniform.report.data);
    let atom = cli(&format!("degeneracy --n 2 --m 2 --k 1 --dist {}", data("two_box_first.dist")));
    assert_eq!(atom.report.data["dimension"], 0);
    assert_eq!(atom.report.data["nullity"], 1);
}

#[test]
fn compatible_family_is_not_observable() {
    let r = cli(&format!("observe --n 3 --m 2 --k 2 --family {}", data("compatible_unobservable.family")));
    assert_eq!(r.exit_code, 1);
    assert_eq!(r.report.status, "not_observable");
    let obs = &r.report.data["observability"];
    assert_eq!(obs["outcome"], "no_nonnegative_solution");
    let s = SystemSpec::new(3, 2, 2, Sigma::All).unwrap();
    let basis = kernel_measures(&s).unwrap();
    let k = RatMatrix::from_fn(8, basis.len(), |i, j| basis[j][i].clone());
    let q = PolytopeQuery::new(k, rats(&obs["signed_solution"])).unwrap();
    assert!(q.verifies_infeasibility(&rats(&obs["certificate"])).unwrap());
}

#[test]
fn incompatible_family_is_reported() {
    let dir = std::env::temp_dir().join(format!("bincay-incompat-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.family");
    let text = std::fs::read_to_string(data("compatible_unobservable.family"))
        .unwrap()
        .replace("i=(1,2);j=(0,0) 1/12", "i=(1,2);j=(0,0) 1/10");
    std::fs::write(&path, text).unwrap();
    let r = cli(&format!("observe --n 3 --m 2 --k 2 --family {}", path.display()));
    assert_eq!(r.exit_code, 1);
    assert_eq!(r.report.status, "incompatible");
    assert!(r.report.data["violation"].is_object());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn identity_family_has_a_unique_witness() {
    let r = cli(&format!("observe --sigma bij --m 3 --k 1 --family {}", data("identity_bij3.family")));
    assert_eq!(r.exit_code, 0);
    let witness = rats(&r.report.data["observability"]["witness"]);
    let mut expected = vec![Rat::from_integer(0.into()); 6];
    expected[0] = Rat::from_integer(1.into());
    assert_eq!(witness, expected);
    let d = cli(&format!("kernel --sigma bij --m 3 --k 1"));
    assert_eq!(d.report.data["dimension"], 1);
}

#[test]
fn simulation_is_deterministic() {
    let args = format!("simulate --n 2 --m 2 --k 1 --dist {} --rounds 100000 --seed 11", data("two_box_uniform.dist"));
    let mut a = cli(&args);
    let mut b = cli(&args);
    assert_eq!(render(&mut a), render(&mut b));
    assert!(a.report.data["max_deviation"].as_f64().unwrap() <= 0.02);
    let other = cli(&args.replace("--seed 11", "--seed 12"));
    assert_ne!(other.report.data["counts"], a.report.data["counts"]);
}

#[test]
fn rsk_and_lis_counts() {
    let r = cli("rsk 3,1,2");
    assert_eq!(r.report.data["shape"], serde_json::json!([2, 1]));
    assert_eq!(r.report.data["lis"], 2);
    assert_eq!(cli("rsk 1,1,2").exit_code, 2);
    let l = cli("lis-count --m 5");
    assert_eq!(l.report.status, "verified");
    assert_eq!(l.report.data["kernels"][2]["kernel_dim"], 42);
}

#[test]
fn csv_is_rejected_for_non_tabular_payloads() {
    let mut r = cli("kernel --n 2 --m 2 --k 1 --format csv");
    assert!(render_report(&r, Format::Csv).is_err());
    let text = render(&mut r);
    assert_eq!(r.exit_code, 2);
    assert!(text.contains("no tabular output"));
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_bincay");
    let ok = Command::new(bin).args(["spectrum", "sym", "--m", "4", "--k", "1", "--verify"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&ok.stdout).unwrap();
    assert_eq!(v["status"], "verified");
    let usage = Command::new(bin).args(["spectrum", "sym", "--m", "99", "--k", "-1"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(2));
    let negative = Command::new(bin)
        .args(["observe", "--n", "3", "--m", "2", "--k", "2", "--family"])
        .arg(data("compatible_unobservable.family"))
        .output()
        .unwrap();
    assert_eq!(negative.status.code(), Some(1));
}

#[test]
fn verify_all_fast_passes() {
    let r = cli("verify-all --fast");
    assert_eq!(r.exit_code, 0, "{}", serde_json::to_string_pretty(&r.report.data).unwrap());
    let criteria = r.report.data["criteria"].as_array().unwrap();
    assert_eq!(criteria.len(), 11);
    assert!(criteria.iter().all(|c| c["passed"] == true));
}
