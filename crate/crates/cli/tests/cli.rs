//! End-to-end tests against the compiled `cac` binary.

use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

/// Seed that draws the worked example's generators (11 public, 3 secret)
/// at p = 17.
const EXAMPLE_SEED: &str = "32";

/// Plaintext block of the worked example, row-major.
const PLAINTEXT_BLOCK: [u8; 64] = [
    2, 3, 5, 9, 8, 0, 2, 1, //
    1, 5, 9, 2, 9, 3, 0, 5, //
    2, 1, 3, 2, 5, 6, 8, 7, //
    5, 3, 0, 7, 8, 7, 3, 1, //
    4, 2, 3, 1, 9, 8, 7, 3, //
    0, 9, 2, 3, 5, 6, 8, 9, //
    1, 0, 2, 9, 6, 7, 9, 8, //
    9, 1, 3, 2, 4, 4, 5, 6,
];

/// Expected ciphertext block: the public matrix times the plaintext.
const EXPECTED_CIPHER: [[u64; 8]; 8] = [
    [2, 1, 3, 2, 5, 6, 8, 7],
    [5, 12, 2, 10, 13, 13, 11, 10],
    [11, 4, 8, 11, 12, 4, 7, 7],
    [5, 7, 12, 3, 18, 11, 7, 8],
    [14, 4, 3, 9, 12, 11, 8, 7],
    [2, 5, 11, 11, 15, 10, 9, 13],
    [1, 9, 4, 12, 11, 13, 17, 17],
    [6, 3, 6, 3, 14, 14, 15, 10],
];

fn cac(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cac"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = cac(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).expect("utf-8 output")
}

fn exit_code(args: &[&str]) -> i32 {
    cac(args).status.code().expect("exit code")
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path()
        .join(name)
        .to_str()
        .expect("utf-8 path")
        .to_string()
}

fn write_example_keys(dir: &TempDir) -> (String, String) {
    let public = path(dir, "key.pub");
    let secret = path(dir, "key.sec");
    let out = stdout_of(&[
        "keygen",
        "--l",
        "2",
        "--p",
        "17",
        "--seed",
        EXAMPLE_SEED,
        "--public-out",
        &public,
        "--secret-out",
        &secret,
    ]);
    assert!(out.contains("public key fingerprint: sha256:"));
    (public, secret)
}

#[test]
fn generators_match_known_sets() {
    assert_eq!(
        stdout_of(&["generators", "--p", "17"]),
        "3\n5\n6\n7\n10\n11\n12\n14\n"
    );
    assert_eq!(stdout_of(&["generators", "--p", "3"]), "2\n");
    assert_eq!(stdout_of(&["generators", "--p", "7"]), "3\n5\n");
    // Not prime.
    assert_eq!(exit_code(&["generators", "--p", "15"]), 2);
}

#[test]
fn table_prints_matrices_and_representatives() {
    let b0 = stdout_of(&["table", "--l", "2", "--p", "17", "--generator", "3"]);
    assert_eq!(
        b0,
        "0,0,0,0,0,0,1,0\n0,0,0,0,1,0,1,0\n0,0,1,1,0,0,0,0\n0,0,1,0,0,0,0,1\n\
         0,1,0,0,0,1,0,0\n0,0,0,0,1,0,0,1\n1,1,0,0,0,0,0,0\n0,0,0,1,0,1,0,0\n"
    );
    let b3 = stdout_of(&["table", "--l", "2", "--p", "17", "--generator", "11"]);
    assert_eq!(
        b3,
        "0,0,1,0,0,0,0,0\n0,0,0,1,0,1,0,0\n1,0,0,0,0,0,0,1\n0,1,0,0,1,0,0,0\n\
         0,0,0,1,0,0,0,1\n0,1,0,0,0,0,1,0\n0,0,0,0,0,1,1,0\n0,0,1,0,1,0,0,0\n"
    );

    // Symbolic table for even k.
    let sym = stdout_of(&["table", "--l", "2", "--p", "17"]);
    assert_eq!(
        sym,
        "0:0,0:1,0:2,0:3,0:4,0:5,0:6,0:7\n\
         0:1,0:7,1:2,1:3,1:4,1:5,1:6,1:2\n\
         0:2,1:2,0:6,1:6,2:4,2:5,2:4,1:3\n\
         0:3,1:3,1:6,0:5,1:5,2:5,2:5,1:4\n\
         0:4,1:4,2:4,1:5,0:4,1:4,2:4,1:5\n\
         0:5,1:5,2:5,2:5,1:4,0:3,1:3,1:6\n\
         0:6,1:6,2:4,2:5,2:4,1:3,0:2,1:2\n\
         0:7,1:2,1:3,1:4,1:5,1:6,1:2,0:1\n"
    );

    // JSON shape carries decimal-string fields.
    let json = stdout_of(&[
        "table",
        "--l",
        "2",
        "--p",
        "17",
        "--generator",
        "3",
        "--format",
        "json",
    ]);
    let value: serde_json::Value = serde_json::from_str(&json).expect("valid json");
    assert_eq!(value["p"], "17");
    assert_eq!(value["l"], "2");
    assert_eq!(value["k"], "2");
    assert_eq!(value["generator"], "3");
    assert_eq!(value["kind"], "matrix");
    assert_eq!(value["rows"][0][6], "1");

    let json = stdout_of(&["table", "--l", "2", "--p", "17", "--format", "json"]);
    let value: serde_json::Value = serde_json::from_str(&json).expect("valid json");
    assert_eq!(value["kind"], "representatives");
    assert_eq!(value["rows"][1][1], "0:7");

    // Invalid parameter combination.
    assert_eq!(exit_code(&["table", "--l", "2", "--p", "13"]), 2);
}

#[test]
fn keygen_writes_the_expected_secret_file() {
    let dir = TempDir::new().unwrap();
    let (_, secret) = write_example_keys(&dir);
    let contents = std::fs::read_to_string(&secret).unwrap();
    let value: serde_json::Value = serde_json::from_str(&contents).expect("valid json");
    assert_eq!(value["role"], "secret");
    assert_eq!(value["p"], "17");
    assert_eq!(value["l"], "2");
    assert_eq!(value["gamma_prime"], "11");
    assert_eq!(value["gamma_double_prime"], "3");
    assert_eq!(value["r0"], "7");
}

#[test]
fn keygen_rejects_k_equal_one() {
    let dir = TempDir::new().unwrap();
    assert_eq!(
        exit_code(&[
            "keygen",
            "--l",
            "3",
            "--p",
            "19",
            "--seed",
            "1",
            "--public-out",
            &path(&dir, "x.pub"),
            "--secret-out",
            &path(&dir, "x.sec"),
        ]),
        2
    );
}

#[test]
fn keygen_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let (pub1, sec1) = write_example_keys(&dir);
    let pub1_bytes = std::fs::read(&pub1).unwrap();
    let sec1_bytes = std::fs::read(&sec1).unwrap();
    let (pub2, sec2) = write_example_keys(&dir);
    assert_eq!(pub1_bytes, std::fs::read(&pub2).unwrap());
    assert_eq!(sec1_bytes, std::fs::read(&sec2).unwrap());
}

#[test]
fn raw_block_reproduces_the_worked_example() {
    let dir = TempDir::new().unwrap();
    let (public, secret) = write_example_keys(&dir);

    let input = path(&dir, "a.bin");
    std::fs::write(&input, PLAINTEXT_BLOCK).unwrap();
    let cipher = path(&dir, "a.ct.json");
    stdout_of(&[
        "encrypt",
        "--key",
        &public,
        "--in",
        &input,
        "--out",
        &cipher,
        "--raw-block",
    ]);

    let value: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&cipher).unwrap()).unwrap();
    assert_eq!(value["gamma_prime"], "11");
    assert_eq!(value["blocks"].as_array().unwrap().len(), 1);
    for (i, row) in EXPECTED_CIPHER.iter().enumerate() {
        for (j, want) in row.iter().enumerate() {
            assert_eq!(
                value["blocks"][0][i][j],
                want.to_string(),
                "cipher cell ({i},{j})"
            );
        }
    }

    let recovered = path(&dir, "a.out.bin");
    stdout_of(&[
        "decrypt",
        "--key",
        &secret,
        "--in",
        &cipher,
        "--out",
        &recovered,
        "--raw-block",
    ]);
    assert_eq!(std::fs::read(&recovered).unwrap(), PLAINTEXT_BLOCK);

    let attacked = path(&dir, "a.attack.bin");
    stdout_of(&[
        "attack",
        "--key",
        &public,
        "--in",
        &cipher,
        "--out",
        &attacked,
        "--raw-block",
    ]);
    assert_eq!(std::fs::read(&attacked).unwrap(), PLAINTEXT_BLOCK);
}

#[test]
fn empty_message_makes_one_block() {
    let dir = TempDir::new().unwrap();
    let (public, secret) = write_example_keys(&dir);
    let input = path(&dir, "empty.bin");
    std::fs::write(&input, []).unwrap();
    let cipher = path(&dir, "empty.ct.json");
    stdout_of(&[
        "encrypt", "--key", &public, "--in", &input, "--out", &cipher,
    ]);
    let value: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&cipher).unwrap()).unwrap();
    assert_eq!(value["blocks"].as_array().unwrap().len(), 1);

    let out = path(&dir, "empty.out.bin");
    stdout_of(&["decrypt", "--key", &secret, "--in", &cipher, "--out", &out]);
    assert_eq!(std::fs::read(&out).unwrap(), Vec::<u8>::new());
}

#[test]
fn attack_output_is_byte_identical_to_decrypt() {
    let dir = TempDir::new().unwrap();
    let (public, secret) = write_example_keys(&dir);
    // Deterministic pseudo-random messages of varied lengths.
    let mut state = 0x5eed_5eed_u64;
    for round in 0..10u32 {
        let len = (round as usize * 97) % 700;
        let mut message = vec![0u8; len];
        for byte in &mut message {
            state = state
                .wrapping_mul(6364136223846793005)
                .wrapping_add(1442695040888963407);
            *byte = (state >> 33) as u8;
        }
        let input = path(&dir, &format!("m{round}.bin"));
        std::fs::write(&input, &message).unwrap();
        let cipher = path(&dir, &format!("m{round}.ct.json"));
        stdout_of(&[
            "encrypt", "--key", &public, "--in", &input, "--out", &cipher,
        ]);

        let decrypted = path(&dir, &format!("m{round}.dec.bin"));
        stdout_of(&[
            "decrypt", "--key", &secret, "--in", &cipher, "--out", &decrypted,
        ]);
        let attacked = path(&dir, &format!("m{round}.atk.bin"));
        stdout_of(&[
            "attack", "--key", &public, "--in", &cipher, "--out", &attacked,
        ]);

        assert_eq!(std::fs::read(&decrypted).unwrap(), message, "round {round}");
        assert_eq!(
            std::fs::read(&decrypted).unwrap(),
            std::fs::read(&attacked).unwrap(),
            "round {round}"
        );
    }
}

#[test]
fn encryption_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let (public, _) = write_example_keys(&dir);
    let input = path(&dir, "msg.bin");
    std::fs::write(&input, b"same input, same output").unwrap();
    let c1 = path(&dir, "c1.json");
    let c2 = path(&dir, "c2.json");
    stdout_of(&["encrypt", "--key", &public, "--in", &input, "--out", &c1]);
    stdout_of(&["encrypt", "--key", &public, "--in", &input, "--out", &c2]);
    assert_eq!(std::fs::read(&c1).unwrap(), std::fs::read(&c2).unwrap());
}

#[test]
fn tampered_ciphertext_fails_with_integrity_code() {
    let dir = TempDir::new().unwrap();
    let (public, secret) = write_example_keys(&dir);
    let input = path(&dir, "msg.bin");
    std::fs::write(&input, b"do not touch").unwrap();
    let cipher = path(&dir, "ct.json");
    stdout_of(&[
        "encrypt", "--key", &public, "--in", &input, "--out", &cipher,
    ]);

    let mut value: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&cipher).unwrap()).unwrap();
    value["blocks"][0][0][0] = serde_json::Value::String("987654321".into());
    std::fs::write(&cipher, serde_json::to_string_pretty(&value).unwrap()).unwrap();

    let out = path(&dir, "out.bin");
    assert_eq!(
        exit_code(&["decrypt", "--key", &secret, "--in", &cipher, "--out", &out]),
        4
    );
    assert_eq!(
        exit_code(&["attack", "--key", &public, "--in", &cipher, "--out", &out]),
        4
    );
}

#[test]
fn ciphertext_is_bound_to_its_key() {
    let dir = TempDir::new().unwrap();
    let (public17, _) = write_example_keys(&dir);
    let input = path(&dir, "msg.bin");
    std::fs::write(&input, b"bound").unwrap();
    let cipher = path(&dir, "ct.json");
    stdout_of(&[
        "encrypt", "--key", &public17, "--in", &input, "--out", &cipher,
    ]);

    // Keys for different parameters must be refused.
    let other_pub = path(&dir, "other.pub");
    let other_sec = path(&dir, "other.sec");
    stdout_of(&[
        "keygen",
        "--l",
        "2",
        "--p",
        "41",
        "--seed",
        "1",
        "--public-out",
        &other_pub,
        "--secret-out",
        &other_sec,
    ]);
    let out = path(&dir, "out.bin");
    assert_eq!(
        exit_code(&["decrypt", "--key", &other_sec, "--in", &cipher, "--out", &out]),
        2
    );
}

#[test]
fn corrupted_secret_key_is_rejected() {
    let dir = TempDir::new().unwrap();
    let (public, secret) = write_example_keys(&dir);
    let input = path(&dir, "msg.bin");
    std::fs::write(&input, b"x").unwrap();
    let cipher = path(&dir, "ct.json");
    stdout_of(&[
        "encrypt", "--key", &public, "--in", &input, "--out", &cipher,
    ]);

    let mut value: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&secret).unwrap()).unwrap();
    value["r0"] = serde_json::Value::String("5".into());
    let bad_key = path(&dir, "bad.sec");
    std::fs::write(&bad_key, serde_json::to_string_pretty(&value).unwrap()).unwrap();

    let out = path(&dir, "out.bin");
    assert_eq!(
        exit_code(&["decrypt", "--key", &bad_key, "--in", &cipher, "--out", &out]),
        4
    );
}

#[test]
fn bench_reports_the_pair_ratio() {
    let out = stdout_of(&["bench", "--l", "2", "--p", "17", "--reps", "2"]);
    let mut lines = out.lines();
    let header = lines.next().unwrap();
    assert!(header
        .starts_with("p,l,e,k,generator,reps,class_count,naive_evals,reduced_evals,pair_ratio"));
    let row = lines.next().unwrap();
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(&fields[..4], &["17", "2", "8", "2"]);
    assert_eq!(fields[6], "15");
    assert_eq!(fields[7], "64");
    assert_eq!(fields[8], "15");
    assert_eq!(fields[9], "4.2667");

    // l = 3: 324 pairs over 64 classes; --out writes the same CSV to a file.
    let dir = TempDir::new().unwrap();
    let csv = path(&dir, "bench.csv");
    let printed = cac(&[
        "bench", "--l", "3", "--p", "37", "--reps", "1", "--out", &csv,
    ]);
    assert!(printed.status.success());
    let out = std::fs::read_to_string(&csv).unwrap();
    let row = out.lines().nth(1).unwrap();
    let fields: Vec<&str> = row.split(',').collect();
    assert_eq!(fields[6], "64");
    assert_eq!(fields[7], "324");
    assert_eq!(fields[8], "64");
    assert_eq!(fields[9], "5.0625");
}

#[test]
fn raw_block_requires_exact_size() {
    let dir = TempDir::new().unwrap();
    let (public, _) = write_example_keys(&dir);
    let input = path(&dir, "short.bin");
    std::fs::write(&input, [1u8; 63]).unwrap();
    let out = path(&dir, "ct.json");
    assert_eq!(
        exit_code(&[
            "encrypt",
            "--key",
            &public,
            "--in",
            &input,
            "--out",
            &out,
            "--raw-block"
        ]),
        4
    );
    assert!(!Path::new(&out).exists());
}
