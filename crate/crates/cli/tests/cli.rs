use std::fs;
use std::path::Path;
use std::process::Command;

use mlbicgstab::gallery;
use mlbicgstab::sparse::{write_matrix_market, CsrMatrix};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn mlnsolve(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_mlnsolve")).args(args).output().unwrap();
    (
        out.status.code().unwrap_or(-100),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn without_seconds(csv: &str) -> Vec<String> {
    csv.lines()
        .map(|l| {
            let mut f: Vec<&str> = l.split(',').collect();
            f.remove(6);
            f.join(",")
        })
        .collect()
}

#[test]
fn sweep_to_csv_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let a = gallery::random_diag_dominant::<f64>(100, 0.05, 1.2, &mut rng);
    let m = dir.path().join("a.mtx");
    write_matrix_market(&m, &a).unwrap();
    let mut csvs = Vec::new();
    for run in 0..2 {
        let out = dir.path().join(format!("run{run}.csv"));
        let (code, _, err) = mlnsolve(&[
            "--matrix", p(&m), "--rhs-ones", "--solver", "mlbicgstabt", "--n", "1,2,4,8", "--precond", "ilu0",
            "--seed", "11", "--out", p(&out),
        ]);
        assert_eq!(code, 0, "{err}");
        csvs.push(fs::read_to_string(out).unwrap());
    }
    let lines: Vec<&str> = csvs[0].lines().collect();
    assert_eq!(
        lines[0],
        "solver,n,flag,iter,err,true_err,seconds,matvecs,hermitian_matvecs,precond_applies,dots"
    );
    assert_eq!(lines.len(), 5);
    for (line, n) in lines[1..].iter().zip([1, 2, 4, 8]) {
        let f: Vec<&str> = line.split(',').collect();
        assert_eq!(f[0], "mlbicgstabt");
        assert_eq!(f[1], n.to_string());
        assert_eq!(f[2], "0");
        let true_err: f64 = f[5].parse().unwrap();
        assert!(true_err < 1e-6);
    }
    assert_eq!(without_seconds(&csvs[0]), without_seconds(&csvs[1]));
}

#[test]
fn every_solver_runs_and_prints_to_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let m = dir.path().join("id.mtx");
    write_matrix_market(&m, &CsrMatrix::<f64>::identity(10)).unwrap();
    for solver in ["mlbicgstabt", "mlbicg", "bicgstab"] {
        let (code, out, err) = mlnsolve(&["--matrix", p(&m), "--solver", solver, "--n", "1,2"]);
        assert_eq!(code, 0, "{solver}: {err}");
        let rows: Vec<&str> = out.lines().skip(1).collect();
        assert_eq!(rows.len(), 2);
        for r in rows {
            let f: Vec<&str> = r.split(',').collect();
            assert_eq!((f[2], f[3]), ("0", "1"), "{solver}: {r}");
        }
    }
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let a = gallery::random_diag_dominant::<f64>(80, 0.1, 0.5, &mut rng);
    let m = dir.path().join("a.mtx");
    write_matrix_market(&m, &a).unwrap();

    let (code, _, _) = mlnsolve(&["--matrix", p(&m), "--max-it", "2", "--tol", "1e-14", "--precond", "none"]);
    assert_eq!(code, 2);

    let rot = CsrMatrix::from_dense(2, 2, &[0.0, -1.0, 1.0, 0.0]).unwrap();
    let r = dir.path().join("rot.mtx");
    write_matrix_market(&r, &rot).unwrap();
    let b = dir.path().join("b.mtx");
    fs::write(&b, "%%MatrixMarket matrix array real general\n2 1\n1\n0\n").unwrap();
    let (code, _, _) = mlnsolve(&["--matrix", p(&r), "--rhs", p(&b), "--n", "1", "--precond", "none"]);
    assert_eq!(code, 3);

    let (code, _, err) = mlnsolve(&["--matrix", p(&dir.path().join("missing.mtx"))]);
    assert_eq!(code, 4, "{err}");
    let (code, _, _) = mlnsolve(&["--matrix", p(&m), "--solver", "gmres"]);
    assert_eq!(code, 4);
    let (code, _, _) = mlnsolve(&["--matrix", p(&m), "--n", "0"]);
    assert_eq!(code, 4);

    let no_diag = CsrMatrix::from_triplets(2, 2, &[(0, 1, 1.0), (1, 0, 1.0)]).unwrap();
    let nd = dir.path().join("nodiag.mtx");
    write_matrix_market(&nd, &no_diag).unwrap();
    let (code, _, err) = mlnsolve(&["--matrix", p(&nd), "--precond", "ilu0"]);
    assert_eq!(code, 5);
    assert!(err.contains("--precond none"));
    let (code, _, _) = mlnsolve(&["--matrix", p(&nd), "--precond", "none", "--solver", "bicgstab"]);
    assert_ne!(code, 5);
}

#[test]
fn sequence_mode_writes_one_row_per_system() {
    let dir = tempfile::tempdir().unwrap();
    let mut manifest = String::new();
    for i in 0..3u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(i);
        let a = gallery::random_diag_dominant::<f64>(50, 0.1, 1.2, &mut rng);
        write_matrix_market(dir.path().join(format!("a{i}.mtx")), &a).unwrap();
        manifest.push_str(&format!("a{i}.mtx\n"));
    }
    let mp = dir.path().join("seq.txt");
    fs::write(&mp, manifest).unwrap();
    let out = dir.path().join("seq.csv");
    let (code, _, err) = mlnsolve(&[
        "--sequence", p(&mp), "--n", "4", "--step", "2", "--n-min", "2", "--n-max", "8", "--out", p(&out),
    ]);
    assert_eq!(code, 0, "{err}");
    let text = fs::read_to_string(out).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "system,n,flag,iter,err,true_err,seconds");
    assert_eq!(lines.len(), 4);
    for (i, l) in lines[1..].iter().enumerate() {
        let f: Vec<&str> = l.split(',').collect();
        assert_eq!(f[0], i.to_string());
        assert_eq!(f[2], "0");
        let n: usize = f[1].parse().unwrap();
        assert!((2..=8).contains(&n));
    }
}

#[test]
fn complex_shadow_strategy_promotes_real_input() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let a = gallery::random_diag_dominant::<f64>(40, 0.1, 1.2, &mut rng);
    let m = dir.path().join("a.mtx");
    write_matrix_market(&m, &a).unwrap();
    let (code, out, err) = mlnsolve(&["--matrix", p(&m), "--shadow", "residual-gauss-complex", "--n", "3", "--kappa", "0.7"]);
    assert_eq!(code, 0, "{err}");
    assert_eq!(out.lines().count(), 2);
}
