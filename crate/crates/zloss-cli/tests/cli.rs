//! End-to-end subcommand behavior: documented exit codes, output schemas,
//! and determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn zloss(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zloss"))
        .args(args)
        .output()
        .expect("spawn zloss")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("zloss-cli-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn read(path: &Path) -> String {
    std::fs::read_to_string(path).unwrap_or_else(|e| panic!("read {}: {e}", path.display()))
}

#[test]
fn sweep_produces_expected_row_count_and_schema() {
    let out = tmp("sweep.csv");
    let res = zloss(&[
        "sweep", "--task", "regression", "--n", "400", "--outlier-frac", "0.1", "--sigma", "1.5",
        "--batch-sizes", "16,32,64", "--trials", "3", "--seed", "42", "--out", out.to_str().unwrap(),
        "--quiet",
    ]);
    assert_eq!(code(&res), 0, "stderr: {}", String::from_utf8_lossy(&res.stderr));
    let body = read(&out);
    let mut lines = body.lines();
    assert_eq!(
        lines.next().unwrap(),
        "task,method,batch_size,trial,sigma,n,outlier_frac,tp,fp,fn,tn,precision,recall,f1"
    );
    let rows: Vec<&str> = lines.collect();
    // 3 trials x 3 batch sizes + 3 full rows.
    assert_eq!(rows.len(), 12);
    assert_eq!(rows.iter().filter(|r| r.contains(",full,")).count(), 3);
    // Manifest sits beside the CSV.
    assert!(out.with_extension("csv.manifest.json").exists());
}

#[test]
fn sweep_without_out_is_a_usage_error() {
    let res = zloss(&["sweep", "--task", "regression"]);
    assert_eq!(code(&res), 2);
}

#[test]
fn sweep_with_empty_batch_sizes_is_a_usage_error() {
    let out = tmp("nope.csv");
    let res = zloss(&[
        "sweep", "--task", "regression", "--batch-sizes", "", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&res), 2);
}

#[test]
fn sweep_svg_flag_renders_a_chart() {
    let out = tmp("sweep_chart.csv");
    let res = zloss(&[
        "sweep", "--task", "regression", "--n", "400", "--batch-sizes", "16,64,256",
        "--trials", "2", "--out", out.to_str().unwrap(), "--svg", "--quiet",
    ]);
    assert_eq!(code(&res), 0);
    let svg = read(&out.with_extension("svg"));
    assert!(svg.starts_with("<svg"), "not an svg: {}", &svg[..40.min(svg.len())]);
    assert!(svg.contains("polyline"), "no data line in the chart");
    assert!(svg.contains("full"), "no full-dataset reference line");
}

#[test]
fn sweep_reruns_byte_identically() {
    let a = tmp("sweep_a.csv");
    let b = tmp("sweep_b.csv");
    for out in [&a, &b] {
        let res = zloss(&[
            "sweep", "--task", "classification", "--n", "400", "--batch-sizes", "16,128",
            "--trials", "2", "--seed", "7", "--out", out.to_str().unwrap(), "--quiet",
        ]);
        assert_eq!(code(&res), 0);
    }
    assert_eq!(read(&a), read(&b));
}

#[test]
fn train_demo_anneals_first_to_last_row() {
    let out = tmp("demo.csv");
    let res = zloss(&[
        "train-demo", "--task", "regression", "--loss", "zmse", "--epochs", "100",
        "--anneal", "100:2", "--n", "200", "--out", out.to_str().unwrap(), "--quiet",
    ]);
    assert_eq!(code(&res), 0, "stderr: {}", String::from_utf8_lossy(&res.stderr));
    let body = read(&out);
    let mut lines = body.lines();
    assert_eq!(lines.next().unwrap(), "epoch,sigma,train_loss,masked_out_count,model_metric");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 100);
    assert!(rows[0].starts_with("0,100,"));
    assert!(rows[99].starts_with("99,2,"));
}

#[test]
fn train_demo_plain_mse_masks_nothing() {
    let out = tmp("demo_mse.csv");
    let res = zloss(&[
        "train-demo", "--task", "regression", "--loss", "mse", "--epochs", "20", "--n", "200",
        "--out", out.to_str().unwrap(), "--quiet",
    ]);
    assert_eq!(code(&res), 0);
    for row in read(&out).lines().skip(1) {
        let masked: usize = row.split(',').nth(3).unwrap().parse().unwrap();
        assert_eq!(masked, 0, "row {row}");
    }
}

#[test]
fn train_demo_classification_reports_balanced_accuracy() {
    let out = tmp("demo_cls.csv");
    let res = zloss(&[
        "train-demo", "--task", "classification", "--loss", "zbce", "--epochs", "30",
        "--n", "400", "--lr", "0.5", "--out", out.to_str().unwrap(), "--quiet",
    ]);
    assert_eq!(code(&res), 0);
    let body = read(&out);
    let last = body.lines().last().unwrap();
    let metric: f64 = last.split(',').nth(4).unwrap().parse().unwrap();
    assert!(metric > 0.7, "balanced accuracy {metric}");
}

#[test]
fn train_demo_mismatched_loss_is_a_usage_error() {
    let out = tmp("demo_bad.csv");
    let res = zloss(&[
        "train-demo", "--task", "regression", "--loss", "zbce", "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&res), 2);
}

#[test]
fn clean_flags_exactly_the_planted_row() {
    let input = tmp("clean_in.csv");
    let mut body = String::from("id,target\n");
    for i in 1..=10 {
        body.push_str(&format!("r{i},0\n"));
    }
    body.push_str("r11,100\n");
    std::fs::write(&input, body).unwrap();

    let out = tmp("clean_out.csv");
    let res = zloss(&[
        "clean", "--input", input.to_str().unwrap(), "--sigma", "2", "--out", out.to_str().unwrap(),
        "--quiet",
    ]);
    assert_eq!(code(&res), 0, "stderr: {}", String::from_utf8_lossy(&res.stderr));
    let cleaned = read(&out);
    let mut lines = cleaned.lines();
    assert_eq!(lines.next().unwrap(), "id,target,z_score,inlier");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 11);
    for row in &rows[..10] {
        assert!(row.ends_with(",true"), "{row}");
    }
    let planted = rows[10];
    assert!(planted.starts_with("r11,100,"), "{planted}");
    assert!(planted.ends_with(",false"), "{planted}");
    let z: f64 = planted.split(',').nth(2).unwrap().parse().unwrap();
    assert!((z - 3.015113444).abs() < 1e-6, "z = {z}");
}

#[test]
fn clean_constant_targets_are_all_inliers() {
    let input = tmp("clean_const.csv");
    std::fs::write(&input, "id,target\na,5\nb,5\nc,5\n").unwrap();
    let out = tmp("clean_const_out.csv");
    let res = zloss(&[
        "clean", "--input", input.to_str().unwrap(), "--out", out.to_str().unwrap(), "--quiet",
    ]);
    assert_eq!(code(&res), 0);
    for row in read(&out).lines().skip(1) {
        assert!(row.ends_with(",0,true"), "{row}");
    }
}

#[test]
fn clean_classification_mode_keys_off_the_header() {
    let input = tmp("clean_cls.csv");
    let mut body = String::from("id,logit,label\n");
    let logits = [2.5, 0.2, -1.1, 1.3, -2.0, 3.0];
    let labels = [1, 1, 0, 1, 0, 1];
    for i in 0..6 {
        body.push_str(&format!("s{i},{},{}\n", logits[i], labels[i]));
    }
    std::fs::write(&input, body).unwrap();
    let out = tmp("clean_cls_out.csv");
    let res = zloss(&[
        "clean", "--input", input.to_str().unwrap(), "--sigma", "1.1",
        "--out", out.to_str().unwrap(), "--quiet",
    ]);
    assert_eq!(code(&res), 0);
    let cleaned = read(&out);
    let outliers: Vec<&str> = cleaned.lines().filter(|l| l.ends_with(",false")).collect();
    assert_eq!(outliers.len(), 1, "{cleaned}");
    assert!(outliers[0].starts_with("s1,0.2,"), "{}", outliers[0]);
}

#[test]
fn clean_error_mode_uses_squared_residuals() {
    let input = tmp("clean_err.csv");
    std::fs::write(
        &input,
        "id,prediction,target\na,0,0\nb,0,0\nc,0,0\nd,10,0\n",
    )
    .unwrap();
    let out = tmp("clean_err_out.csv");
    let res = zloss(&[
        "clean", "--input", input.to_str().unwrap(), "--sigma", "1.4",
        "--out", out.to_str().unwrap(), "--quiet",
    ]);
    assert_eq!(code(&res), 0);
    let cleaned = read(&out);
    let flagged: Vec<&str> = cleaned.lines().filter(|l| l.ends_with(",false")).collect();
    assert_eq!(flagged.len(), 1);
    assert!(flagged[0].starts_with("d,10,0,1.5"), "{}", flagged[0]);
}

#[test]
fn clean_malformed_rows_exit_2_listing_lines() {
    let input = tmp("clean_bad.csv");
    std::fs::write(&input, "id,target\na,1\nb,not_a_number\nc,3\nd,\n").unwrap();
    let out = tmp("clean_bad_out.csv");
    let res = zloss(&[
        "clean", "--input", input.to_str().unwrap(), "--out", out.to_str().unwrap(),
    ]);
    assert_eq!(code(&res), 2);
    let stderr = String::from_utf8_lossy(&res.stderr);
    assert!(stderr.contains('3') && stderr.contains('5'), "stderr: {stderr}");
}

#[test]
fn cutoff_reports_both_methods() {
    let input = tmp("logits.csv");
    let mut body = String::from("logit,label\n");
    use rand::SeedableRng;
    use rand_distr::Distribution;
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(40);
    let d0 = rand_distr::Normal::new(-2.0, 1.0).unwrap();
    let d1 = rand_distr::Normal::new(2.0, 1.0).unwrap();
    for _ in 0..1000 {
        body.push_str(&format!("{:.6},0\n", d0.sample(&mut rng)));
    }
    for _ in 0..1000 {
        body.push_str(&format!("{:.6},1\n", d1.sample(&mut rng)));
    }
    std::fs::write(&input, body).unwrap();

    let res = zloss(&["cutoff", "--input", input.to_str().unwrap(), "--method", "gaussian", "--quiet"]);
    assert_eq!(code(&res), 0);
    let stdout = String::from_utf8_lossy(&res.stdout);
    let logit_cutoff: f64 = stdout
        .lines()
        .find_map(|l| l.strip_prefix("logit_cutoff: "))
        .expect("logit_cutoff line")
        .parse()
        .unwrap();
    assert!(logit_cutoff.abs() < 0.2, "{stdout}");

    let out = tmp("cutoff.csv");
    let res = zloss(&[
        "cutoff", "--input", input.to_str().unwrap(), "--method", "skewnorm",
        "--out", out.to_str().unwrap(), "--quiet",
    ]);
    assert_eq!(code(&res), 0);
    let stdout = String::from_utf8_lossy(&res.stdout);
    let prob: f64 = stdout
        .lines()
        .find_map(|l| l.strip_prefix("prob_cutoff: "))
        .expect("prob_cutoff line")
        .parse()
        .unwrap();
    assert!((prob - 0.5).abs() < 0.05, "{stdout}");
    let body = read(&out);
    assert!(body.starts_with("method,logit_cutoff,prob_cutoff,inliers0,inliers1\nskewnorm,,"));
}

#[test]
fn cutoff_single_sample_class_exits_1_with_counts() {
    let input = tmp("logits_thin.csv");
    std::fs::write(&input, "logit,label\n0.5,0\n1.0,1\n1.1,1\n0.9,1\n").unwrap();
    let res = zloss(&["cutoff", "--input", input.to_str().unwrap(), "--method", "gaussian"]);
    assert_eq!(code(&res), 1);
    let stderr = String::from_utf8_lossy(&res.stderr);
    assert!(stderr.contains("Not enough inlier points"), "stderr: {stderr}");
    assert!(stderr.contains("class0=1"), "stderr: {stderr}");
}

#[test]
fn cutoff_malformed_csv_exits_2() {
    let input = tmp("logits_bad.csv");
    std::fs::write(&input, "logit,label\n0.5,2\n").unwrap();
    let res = zloss(&["cutoff", "--input", input.to_str().unwrap()]);
    assert_eq!(code(&res), 2);
    let input2 = tmp("logits_bad_header.csv");
    std::fs::write(&input2, "score,y\n0.5,1\n").unwrap();
    let res = zloss(&["cutoff", "--input", input2.to_str().unwrap()]);
    assert_eq!(code(&res), 2);
}

#[test]
fn anneal_table_matches_the_linear_schedule() {
    let out = tmp("anneal.csv");
    let res = zloss(&[
        "anneal-table", "--epochs", "4", "--start", "10", "--end", "2",
        "--out", out.to_str().unwrap(), "--quiet",
    ]);
    assert_eq!(code(&res), 0);
    assert_eq!(read(&out), "epoch,sigma\n0,10\n1,8\n2,6\n3,4\n4,2\n");

    // Defaults: 100 down to 2.
    let out2 = tmp("anneal_default.csv");
    let res = zloss(&["anneal-table", "--out", out2.to_str().unwrap(), "--quiet"]);
    assert_eq!(code(&res), 0);
    let body = read(&out2);
    assert_eq!(body.lines().nth(1).unwrap(), "0,100");
    assert_eq!(body.lines().last().unwrap(), "100,2");
}

#[test]
fn anneal_table_zero_epochs_exits_2() {
    let out = tmp("anneal_bad.csv");
    let res = zloss(&["anneal-table", "--epochs", "0", "--out", out.to_str().unwrap()]);
    assert_eq!(code(&res), 2);
}

#[test]
fn unknown_flag_exits_2() {
    let res = zloss(&["sweep", "--task", "regression", "--no-such-flag"]);
    assert_eq!(code(&res), 2);
}
