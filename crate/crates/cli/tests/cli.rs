use std::io::Write;
use std::process::Command;

use pairrank_cli::{parse_comparisons_csv, run, EXIT_DATA, EXIT_OK, EXIT_USAGE};

const FOOD: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/tests/fixtures/food.csv");

struct Output {
    code: i32,
    stdout: String,
    stderr: String,
}

fn pairrank(args: &[&str], stdin: &str) -> Output {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("pairrank").chain(args.iter().copied());
    let code = run(argv, &mut stdin.as_bytes(), &mut out, &mut err);
    Output {
        code,
        stdout: String::from_utf8(out).unwrap(),
        stderr: String::from_utf8(err).unwrap(),
    }
}

#[test]
fn counting_food() {
    let out = pairrank(&["-i", FOOD, "counting"], "");
    assert_eq!(out.code, EXIT_OK);
    let lines: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(lines[0], "item,score,rank");
    assert_eq!(lines[1], "Tacos,2.0,1");
    assert_eq!(lines.len(), 6);
    assert_eq!(lines[5], "Sushi,0.0,5");
}

#[test]
fn reads_standard_input() {
    let text = std::fs::read_to_string(FOOD).unwrap();
    let out = pairrank(&["counting"], &text);
    assert_eq!(out.stdout, pairrank(&["--input", FOOD, "counting"], "").stdout);
}

#[test]
fn every_algorithm_prints_the_same_header_and_all_items() {
    for algorithm in pairrank::Algorithm::names() {
        let out = pairrank(&["-i", FOOD, algorithm], "");
        assert_eq!(out.code, EXIT_OK, "{algorithm}: {}", out.stderr);
        let mut reader = csv::Reader::from_reader(out.stdout.as_bytes());
        assert_eq!(reader.headers().unwrap(), vec!["item", "score", "rank"]);
        let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
        assert_eq!(rows.len(), 5);
        let ranks: Vec<usize> = rows.iter().map(|r| r[2].parse().unwrap()).collect();
        assert!(ranks.windows(2).all(|w| w[0] <= w[1]));
    }
}

#[test]
fn scores_keep_full_precision() {
    let out = pairrank(&["-i", FOOD, "pagerank"], "");
    let mut reader = csv::Reader::from_reader(out.stdout.as_bytes());
    let printed: Vec<f64> = reader.records().map(|r| r.unwrap()[1].parse().unwrap()).collect();

    let records = parse_comparisons_csv(std::fs::File::open(FOOD).unwrap()).unwrap();
    let result = pairrank::pagerank(&records, None, &pairrank::IterParams::pagerank()).unwrap();
    let mut expected: Vec<f64> = result.values().collect();
    expected.sort_by(|a, b| b.total_cmp(a));
    assert_eq!(printed, expected);
}

#[test]
fn header_only_input() {
    let out = pairrank(&["bradley-terry"], "left,right,winner\n");
    assert_eq!(out.code, EXIT_OK);
    assert_eq!(out.stdout, "item,score,rank\n");
}

#[test]
fn bootstrap_adds_bounds() {
    let out = pairrank(&["-i", FOOD, "elo", "--bootstrap", "20"], "");
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let mut reader = csv::Reader::from_reader(out.stdout.as_bytes());
    assert_eq!(reader.headers().unwrap(), vec!["item", "score", "rank", "lower", "upper"]);
    for row in reader.records() {
        let row = row.unwrap();
        let lower: f64 = row[3].parse().unwrap();
        let upper: f64 = row[4].parse().unwrap();
        assert!(lower <= upper);
    }
    assert_eq!(out.stdout, pairrank(&["-i", FOOD, "elo", "--bootstrap", "20"], "").stdout);
}

#[test]
fn json_output() {
    let out = pairrank(&["-i", FOOD, "newman", "--json"], "");
    let value: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(value["algorithm"], "newman");
    assert_eq!(value["items"].as_array().unwrap().len(), 5);
    assert!(value["nu"].is_number());
}

#[test]
fn elo_parameters_reach_the_algorithm() {
    let out = pairrank(&["--k", "10", "--initial", "0", "elo"], "left,right,winner\nA,B,left\n");
    assert_eq!(out.stdout, "item,score,rank\nA,5.0,1\nB,-5.0,2\n");
}

#[test]
fn usage_errors_exit_2() {
    let missing = pairrank(&["-i", "/no/such/file.csv", "counting"], "");
    assert_eq!(missing.code, EXIT_USAGE);
    assert!(missing.stderr.contains("/no/such/file.csv"));

    let unknown = pairrank(&["-i", FOOD, "glicko"], "");
    assert_eq!(unknown.code, EXIT_USAGE);
    for name in pairrank::Algorithm::names() {
        assert!(unknown.stderr.contains(name));
    }

    assert_eq!(pairrank(&[], "").code, EXIT_USAGE);
    assert_eq!(pairrank(&["--frobnicate", "elo"], "").code, EXIT_USAGE);
    assert_eq!(pairrank(&["--k", "-3", "elo"], "left,right,winner\n").code, EXIT_USAGE);
    assert_eq!(pairrank(&["--damping", "1.5", "pagerank"], "left,right,winner\n").code, EXIT_USAGE);
    assert_eq!(pairrank(&["--bootstrap", "0", "elo"], "left,right,winner\n").code, EXIT_USAGE);
}

#[test]
fn data_errors_exit_1_with_line_number() {
    let out = pairrank(&["elo"], "left,right,winner\nA,B,left\nA,B,won\n");
    assert_eq!(out.code, EXIT_DATA);
    assert!(out.stderr.contains("line 3"), "{}", out.stderr);
    assert!(out.stdout.is_empty());

    let ragged = pairrank(&["elo"], "left,right,winner\nA,B,left\nA,B\n");
    assert_eq!(ragged.code, EXIT_DATA);
    assert!(ragged.stderr.contains("line 3"), "{}", ragged.stderr);

    let weight = pairrank(&["counting"], "left,right,winner,weight\nA,B,left,-2\n");
    assert_eq!(weight.code, EXIT_DATA);
    assert!(weight.stderr.contains("line 2"));

    let column = pairrank(&["counting"], "left,right,outcome\nA,B,left\n");
    assert_eq!(column.code, EXIT_DATA);
    assert!(column.stderr.contains("winner"));
}

#[test]
fn help_goes_to_stdout() {
    let out = pairrank(&["--help"], "");
    assert_eq!(out.code, EXIT_OK);
    assert!(out.stdout.contains("--bootstrap"));
}

#[test]
fn bench_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("timings.csv");
    let out = pairrank(
        &["bench", "--sizes", "10,100", "--reps", "2", "--algorithms", "elo,counting", "--out", path.to_str().unwrap()],
        "",
    );
    assert_eq!(out.code, EXIT_OK, "{}", out.stderr);
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().next(), Some("algorithm,size,mean_s,ci_low_s,ci_high_s"));
    assert_eq!(text.lines().count(), 5);
    assert!(out.stderr.contains("baseline"));

    assert_eq!(pairrank(&["bench", "--algorithms", "glicko"], "").code, EXIT_USAGE);
    assert_eq!(pairrank(&["bench", "--sizes", "10", "--reps", "1"], "").code, EXIT_USAGE);
}

#[test]
fn binary_exit_codes() {
    let binary = env!("CARGO_BIN_EXE_pairrank");
    let ok = Command::new(binary).args(["-i", FOOD, "counting"]).output().unwrap();
    assert_eq!(ok.status.code(), Some(EXIT_OK));
    assert!(String::from_utf8_lossy(&ok.stdout).starts_with("item,score,rank\nTacos,2.0,1\n"));

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    write!(bad, "left,right,winner\nA,B,sideways\n").unwrap();
    let data = Command::new(binary).args(["-i", bad.path().to_str().unwrap(), "elo"]).output().unwrap();
    assert_eq!(data.status.code(), Some(EXIT_DATA));

    let usage = Command::new(binary).args(["-i", FOOD, "trueskill"]).output().unwrap();
    assert_eq!(usage.status.code(), Some(EXIT_USAGE));
}
