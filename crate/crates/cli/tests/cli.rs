use std::path::Path;
use std::process::{Command, Output};

use casimir_cli::output::COLUMNS;

const BIN: &str = env!("CARGO_BIN_EXE_casimir");

fn casimir(dir: &Path, args: &[&str]) -> Output {
    Command::new(BIN)
        .args(args)
        .current_dir(dir)
        .env_remove("CASIMIR_WORKERS")
        .output()
        .expect("binary runs")
}

fn split(csv: &str) -> (Vec<&str>, Vec<&str>, Vec<Vec<String>>) {
    let meta: Vec<&str> = csv.lines().filter(|l| l.starts_with('#')).collect();
    let mut body = csv.lines().filter(|l| !l.starts_with('#'));
    let header: Vec<&str> = body.next().unwrap().split(',').collect();
    let rows = body
        .map(|l| {
            let mut reader = csv::ReaderBuilder::new()
                .has_headers(false)
                .from_reader(l.as_bytes());
            let record = reader.records().next().unwrap().unwrap();
            record.iter().map(String::from).collect()
        })
        .collect();
    (meta, header, rows)
}

const SMALL: &str = "models = perfect, drude
radii = 100nm, 0.2um
separations = 2um, 4um
quantities = free_energy, force
tol = 1e-4
";

#[test]
fn sweep_writes_versioned_csv_in_grid_order() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("small.cfg"), SMALL).unwrap();
    let out = casimir(
        dir.path(),
        &["sweep", "--config", "small.cfg", "--out", "a.csv"],
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let text = std::fs::read_to_string(dir.path().join("a.csv")).unwrap();
    let (meta, header, rows) = split(&text);
    assert_eq!(meta[0], "# schema_version = 1");
    assert!(meta.iter().any(|l| l.starts_with("# config_hash = ")));
    assert!(meta.iter().any(|l| l.starts_with("# constant k_B = ")));
    assert_eq!(header, COLUMNS);
    assert_eq!(rows.len(), 8);
    let keys: Vec<(String, String, String)> = rows
        .iter()
        .map(|r| (r[0].clone(), r[1].clone(), r[2].clone()))
        .collect();
    let mut expected = Vec::new();
    for m in ["perfect", "drude"] {
        for r in ["0.1", "0.2"] {
            for l in ["2", "4"] {
                expected.push((m.to_string(), r.to_string(), l.to_string()));
            }
        }
    }
    assert_eq!(keys, expected);
    for r in &rows {
        assert_eq!(r[15], "ok");
        let energy: f64 = r[4].parse().unwrap();
        let force: f64 = r[5].parse().unwrap();
        assert!(energy < 0.0 && force > 0.0);
        assert!(r[6].is_empty() && r[7].is_empty());
    }
    // nothing but the config and the result left behind
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 2);
}

#[test]
fn rows_do_not_depend_on_worker_count() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("small.cfg"), SMALL).unwrap();
    let one = casimir(
        dir.path(),
        &[
            "sweep",
            "--config",
            "small.cfg",
            "--out",
            "one.csv",
            "--workers",
            "1",
        ],
    );
    let two = Command::new(BIN)
        .args(["sweep", "--config", "small.cfg", "--out", "two.csv"])
        .current_dir(dir.path())
        .env("CASIMIR_WORKERS", "3")
        .output()
        .unwrap();
    assert!(one.status.success() && two.status.success());
    assert!(String::from_utf8_lossy(&two.stdout).contains("3 worker(s)"));
    let strip = |name: &str| -> Vec<String> {
        std::fs::read_to_string(dir.path().join(name))
            .unwrap()
            .lines()
            .filter(|l| !l.starts_with("# config out"))
            .map(String::from)
            .collect()
    };
    assert_eq!(strip("one.csv"), strip("two.csv"));
}

#[test]
fn flags_override_config() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("c.cfg"),
        "radii = 0.1um\nseparations = 3um\ntol = 1e-3\nlmax = 4\nout = from_config.csv\n",
    )
    .unwrap();
    let out = casimir(
        dir.path(),
        &["sweep", "--config", "c.cfg", "--tol", "1e-5", "--lmax", "6"],
    );
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("from_config.csv")).unwrap();
    assert!(text.contains("# config tol = 1e-5\n"));
    assert!(text.contains("# config lmax = 6\n"));
    let (_, _, rows) = split(&text);
    assert_eq!(rows[0][10], "6");
}

#[test]
fn failed_point_sets_status_and_exit_code() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("f.cfg"),
        "radii = 0.1um\nseparations = 3um\ntemperatures = 0K, 300K\nquantities = entropy\ntol = 1e-4\n",
    )
    .unwrap();
    let out = casimir(
        dir.path(),
        &["sweep", "--config", "f.cfg", "--out", "f.csv"],
    );
    assert_eq!(out.status.code(), Some(1));
    let (_, _, rows) = split(&std::fs::read_to_string(dir.path().join("f.csv")).unwrap());
    assert!(rows[0][15].starts_with("failed: "), "{}", rows[0][15]);
    assert_eq!(rows[1][15], "ok");
}

#[test]
fn bad_config_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.cfg"), "radii = 2, 1\n").unwrap();
    let out = casimir(dir.path(), &["sweep", "--config", "bad.cfg"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("ascending"));
    assert!(!dir.path().join("sweep.csv").exists());

    let out = casimir(dir.path(), &["sweep", "--tol", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn existing_output_is_replaced() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("r.csv"), "stale").unwrap();
    std::fs::write(
        dir.path().join("r.cfg"),
        "radii = 0.1um\nseparations = 3um\nquantities = free_energy\n",
    )
    .unwrap();
    let out = casimir(
        dir.path(),
        &["sweep", "--config", "r.cfg", "--out", "r.csv"],
    );
    assert!(out.status.success());
    let text = std::fs::read_to_string(dir.path().join("r.csv")).unwrap();
    assert!(text.starts_with("# schema_version"));
}

#[test]
fn figure_presets_carry_their_grids() {
    use casimir_cli::{config::ModelKind, config::Quantity, Preset};
    let fig1 = Preset::Fig1.spec();
    assert_eq!(fig1.models, vec![ModelKind::Perfect]);
    assert_eq!(fig1.radii, vec![0.1, 0.2, 0.5, 1.0, 2.0]);
    assert_eq!(fig1.temperatures, vec![300.0]);
    assert!((fig1.separations[0] - 0.1).abs() < 1e-15);
    assert_eq!(*fig1.separations.last().unwrap(), 20.0);
    assert!(fig1.quantities.contains(&Quantity::Theta));
    assert!(fig1.quantities.contains(&Quantity::ThetaPfa));
    assert!(fig1.note.is_some());

    let fig2 = Preset::Fig2.spec();
    assert_eq!(fig2.models, vec![ModelKind::Drude]);
    assert!((fig2.plasma_wavelength - 0.136).abs() < 1e-15);
    assert_eq!(fig2.relaxation_ratio, 250.0);

    assert_eq!(Preset::Fig3.spec().quantities, vec![Quantity::Ratio]);
}

#[test]
fn fig1_with_trimmed_grid() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("g.cfg"),
        "radii = 0.1um\nseparations = 5um\ntol = 1e-4\n",
    )
    .unwrap();
    let out = casimir(dir.path(), &["fig1", "--config", "g.cfg"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(dir.path().join("fig1.csv")).unwrap();
    assert!(text.contains("# command = fig1\n"));
    assert!(text.contains("# note = representative radii"));
    let (_, _, rows) = split(&text);
    let theta: f64 = rows[0][7].parse().unwrap();
    let theta_pfa: f64 = rows[0][8].parse().unwrap();
    assert!(theta > 0.0 && theta_pfa >= theta);
}

#[test]
fn validate_runs_selected_criteria() {
    let dir = tempfile::tempdir().unwrap();
    let out = casimir(dir.path(), &["validate", "6"]);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(out.status.success(), "{stdout}");
    assert!(stdout.contains("criterion 6 PASS"));
    assert!(!stdout.contains("criterion 1 "));
}
