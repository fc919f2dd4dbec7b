use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use citeflow::dissemination::read_ledger;
use tempfile::TempDir;

const PAPER_RECORD: &str = include_str!("fixtures/citeseer_99914.xml");

fn citeflow(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_citeflow"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("spawn citeflow")
}

fn ok(dir: &Path, args: &[&str]) -> String {
    let out = citeflow(dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn record(id: &str, authors: &[&str], refs: &[&str], publisher: Option<&str>) -> String {
    let mut xml = format!("<record><header><identifier>{id}</identifier></header><metadata><oai_citeseer:oai_citeseer>");
    for a in authors {
        xml += &format!("<oai_citeseer:author name=\"{a}\"/>");
    }
    for r in refs {
        xml += &format!(
            "<oai_citeseer:relation type=\"References\"><oai_citeseer:uri>{r}</oai_citeseer:uri></oai_citeseer:relation>"
        );
    }
    if let Some(p) = publisher {
        xml += &format!("<dc:publisher>{p}</dc:publisher>");
    }
    xml + "</oai_citeseer:oai_citeseer></metadata></record>\n"
}

/// Writes `records` to `corpus.xml`, ingests it and returns the graph path.
fn ingest(dir: &Path, records: &[String]) -> PathBuf {
    fs::write(dir.join("corpus.xml"), records.concat()).unwrap();
    ok(dir, &["ingest", "corpus.xml", "--out", "graph.txt"]);
    dir.join("graph.txt")
}

fn small_corpus() -> Vec<String> {
    vec![
        record("p1", &["Alice", "Bob"], &["p2", "p3"], Some("J Stat")),
        record("p2", &["Carol"], &["p3"], Some("J Stat")),
        record("p3", &["Dave", "Bob"], &[], Some("Ann Prob")),
        record("p4", &["Eve", "Carol"], &["p1"], Some("Ann Prob")),
        record("p5", &["Frank"], &["p4"], Some("J Stat")),
    ]
}

fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(String::from).collect())
        .collect()
}

#[test]
fn ingest_paper_record() {
    let dir = TempDir::new().unwrap();
    fs::write(dir.path().join("r.xml"), PAPER_RECORD).unwrap();
    let summary = ok(dir.path(), &["ingest", "r.xml", "--out", "g.txt"]);
    assert!(summary.contains("author nodes=2 "), "{summary}");
    assert!(summary.contains("paper nodes=5 "), "{summary}");
    assert!(summary.contains("journal nodes=1 "), "{summary}");

    let first = fs::read(dir.path().join("g.txt")).unwrap();
    ok(dir.path(), &["ingest", "r.xml", "--out", "g.txt"]);
    assert_eq!(first, fs::read(dir.path().join("g.txt")).unwrap());

    let stats = ok(dir.path(), &["stats", "g.txt"]);
    assert!(stats.contains("edges coauthored_with 2 2\n"), "{stats}");
    assert!(stats.contains("edges cites 2 1\n"), "{stats}");
}

#[test]
fn ingest_errors() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    assert_eq!(code(&citeflow(d, &["ingest", "--out", "g.txt"])), 1);

    fs::write(
        d.join("junk.xml"),
        "<record><identifier>a</identifier><unclosed></record>",
    )
    .unwrap();
    let out = citeflow(d, &["ingest", "junk.xml", "--out", "g.txt"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("WARN junk.xml:"));

    fs::write(d.join("r.xml"), PAPER_RECORD).unwrap();
    assert_eq!(
        code(&citeflow(d, &["ingest", "missing.xml", "--out", "g.txt"])),
        2
    );
    assert_eq!(
        code(&citeflow(
            d,
            &["ingest", "r.xml", "--out", "no/such/dir/g.txt"]
        )),
        2
    );
}

#[test]
fn ingest_reads_directories_and_warns_per_record() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    fs::create_dir(d.join("in")).unwrap();
    fs::write(d.join("in/a.xml"), record("a", &["X"], &[], None)).unwrap();
    fs::write(
        d.join("in/b.xml"),
        record("b", &["Y"], &["a"], None) + "<record><identifier>bad</identifier><x></record>",
    )
    .unwrap();
    fs::write(d.join("in/ignored.txt"), "not xml").unwrap();
    let out = citeflow(d, &["ingest", "in", "--out", "g.txt"]);
    assert_eq!(code(&out), 0);
    let stdout = String::from_utf8_lossy(&out.stdout);
    assert!(stdout.contains("records=2"), "{stdout}");
    assert!(stdout.contains("warnings=1"), "{stdout}");
    assert!(String::from_utf8_lossy(&out.stderr).contains("WARN in/b.xml:bad"));
}

#[test]
fn stats_edge_cases() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    fs::write(d.join("empty.txt"), "").unwrap();
    let stats = ok(d, &["stats", "empty.txt"]);
    for line in stats.lines() {
        let last = line.split_whitespace().last().unwrap();
        assert_eq!(last, "0", "{line}");
    }
    fs::write(d.join("bad.txt"), "N paper a\nE paper a paper b cites 1\n").unwrap();
    assert_eq!(code(&citeflow(d, &["stats", "bad.txt"])), 1);
    assert_eq!(code(&citeflow(d, &["stats", "absent.txt"])), 2);
}

#[test]
fn references_on_toy_graph() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    ingest(d, &[record("K", &[], &["P1", "P2"], None)]);
    for engine in [&[][..], &["--oracle"][..]] {
        let mut args = vec![
            "query",
            "references",
            "--graph",
            "graph.txt",
            "--paper",
            "K",
        ];
        args.extend(engine);
        let rows = csv_rows(&ok(d, &args));
        let mut keys: Vec<&str> = rows.iter().map(|r| r[2].as_str()).collect();
        keys.sort();
        assert_eq!(keys, ["P1", "P2"]);
    }
}

#[test]
fn journal_defaults_to_one_row_and_limit_widens() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    ingest(d, &small_corpus());
    let one = ok(
        d,
        &[
            "query",
            "journal",
            "--graph",
            "graph.txt",
            "--paper",
            "p2",
            "--author",
            "carol",
        ],
    );
    assert_eq!(csv_rows(&one).len(), 1);
    let two = ok(
        d,
        &[
            "query",
            "journal",
            "--graph",
            "graph.txt",
            "--paper",
            "p2",
            "--author",
            "carol",
            "--limit",
            "2",
        ],
    );
    assert_eq!(csv_rows(&two).len(), 2);
    assert_eq!(csv_rows(&two)[0], csv_rows(&one)[0]);
}

#[test]
fn unknown_node_and_oversized_graph() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    ingest(d, &small_corpus());
    let out = citeflow(
        d,
        &[
            "query",
            "journal",
            "--graph",
            "graph.txt",
            "--author",
            "Zed Nobody",
        ],
    );
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("zed nobody"));

    let out = citeflow(
        d,
        &[
            "query",
            "references",
            "--graph",
            "graph.txt",
            "--paper",
            "p1",
            "--oracle",
            "--oracle-max-nodes",
            "4",
        ],
    );
    assert_eq!(code(&out), 2);

    let out = citeflow(
        d,
        &[
            "query",
            "references",
            "--graph",
            "graph.txt",
            "--paper",
            "p1",
            "--paper",
            "p2",
        ],
    );
    assert_eq!(code(&out), 1);
}

#[test]
fn usage_errors_are_non_zero() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    for args in [
        &["frobnicate"][..],
        &["query", "nonsense", "--graph", "g"][..],
        &["query", "references", "--graph", "g", "--decay", "fast"][..],
        &[
            "query",
            "references",
            "--graph",
            "g",
            "--exclude-seeds",
            "maybe",
        ][..],
    ] {
        let out = citeflow(d, args);
        assert_ne!(code(&out), 0, "{args:?}");
        let stderr = String::from_utf8_lossy(&out.stderr);
        assert!(
            stderr.contains("Usage") || stderr.contains("--help"),
            "{args:?}: {stderr}"
        );
    }
}

#[test]
fn repeated_seed_gives_identical_outputs() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    ingest(d, &small_corpus());
    let run = |out: &str, threads: &str| {
        ok(
            d,
            &[
                "query",
                "references",
                "--graph",
                "graph.txt",
                "--paper",
                "p1",
                "--seed",
                "42",
                "--threads",
                threads,
                "--out",
                out,
            ],
        );
        (
            fs::read(d.join(out)).unwrap(),
            fs::read_to_string(d.join(format!("{out}.manifest.json"))).unwrap(),
        )
    };
    let (csv_a, manifest_a) = run("a.csv", "1");
    let (csv_b, manifest_b) = run("b.csv", "4");
    assert_eq!(csv_a, csv_b);
    assert_eq!(manifest_a, manifest_b);
    assert!(!manifest_a.contains("wall_clock"));

    let timed = ok(
        d,
        &[
            "query",
            "references",
            "--graph",
            "graph.txt",
            "--paper",
            "p1",
            "--record-timing",
            "--out",
            "t.csv",
        ],
    );
    assert!(timed.is_empty());
    assert!(fs::read_to_string(d.join("t.csv.manifest.json"))
        .unwrap()
        .contains("wall_clock_seconds"));
}

#[test]
fn replay_reproduces_and_detects_changes() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let graph = ingest(d, &small_corpus());
    ok(
        d,
        &[
            "query",
            "reviewers",
            "--graph",
            "graph.txt",
            "--journal",
            "J Stat",
            "--paper",
            "p3",
            "--author",
            "Alice",
            "--seed",
            "5",
            "--out",
            "r.csv",
        ],
    );
    let replayed = ok(d, &["query", "--replay", "r.csv.manifest.json"]);
    assert_eq!(replayed.as_bytes(), fs::read(d.join("r.csv")).unwrap());

    let mut text = fs::read_to_string(&graph).unwrap();
    text.push_str("# edited\n");
    fs::write(&graph, text).unwrap();
    assert_eq!(
        code(&citeflow(d, &["query", "--replay", "r.csv.manifest.json"])),
        1
    );
}

#[test]
fn config_file_then_flags() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    ingest(d, &small_corpus());
    fs::write(
        d.join("run.conf"),
        "decay = 0.5\nparticles = 30\nseed = 9\n",
    )
    .unwrap();
    let base = [
        "query",
        "references",
        "--graph",
        "graph.txt",
        "--paper",
        "p1",
        "--config",
        "run.conf",
    ];
    ok(d, &[&base[..], &["--out", "a.csv"]].concat());
    let m: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(d.join("a.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(m["config"]["decay_scalar"], 0.5);
    assert_eq!(m["config"]["particles_per_seed"], 30);
    assert_eq!(m["rng_seed"], 9);

    ok(
        d,
        &[&base[..], &["--decay", "0.25", "--out", "b.csv"]].concat(),
    );
    let m: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(d.join("b.csv.manifest.json")).unwrap()).unwrap();
    assert_eq!(m["config"]["decay_scalar"], 0.25);
    assert_eq!(m["config"]["particles_per_seed"], 30);

    fs::write(d.join("bad.conf"), "speed = 3\n").unwrap();
    let out = citeflow(
        d,
        &[
            "query",
            "references",
            "--graph",
            "graph.txt",
            "--paper",
            "p1",
            "--config",
            "bad.conf",
        ],
    );
    assert_eq!(code(&out), 1);
    let out = citeflow(
        d,
        &[
            "query",
            "references",
            "--graph",
            "graph.txt",
            "--paper",
            "p1",
            "--decay",
            "1.5",
        ],
    );
    assert_eq!(code(&out), 1);
}

#[test]
fn reviewers_have_influence_and_skip_coauthors() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    ingest(d, &small_corpus());
    for extra in [&[][..], &["--cited-authors"][..]] {
        let args = [
            &[
                "query",
                "reviewers",
                "--graph",
                "graph.txt",
                "--journal",
                "J Stat",
                "--paper",
                "p3",
                "--author",
                "Alice",
                "--author",
                "Bob",
                "--oracle",
            ][..],
            extra,
        ]
        .concat();
        let out = ok(d, &args);
        assert!(out.starts_with("rank,layer,key,energy,influence\n"));
        let rows = csv_rows(&out);
        assert!(!rows.is_empty());
        assert!(rows.iter().all(|r| r[2] != "alice" && r[2] != "bob"));
        let total: f64 = rows.iter().map(|r| r[4].parse::<f64>().unwrap()).sum();
        assert!((total - 1.0).abs() < 1e-9, "{total}");
    }
}

#[test]
fn readers_thresholds_and_contacts() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    ingest(d, &small_corpus());
    let base = [
        "query",
        "readers",
        "--graph",
        "graph.txt",
        "--author",
        "Frank",
        "--paper",
        "p4",
        "--oracle",
    ];
    let all = csv_rows(&ok(d, &base));
    assert!(all.iter().all(|r| r[2] != "frank"));
    let top = &all[0];

    fs::write(d.join("t.txt"), format!("T {} 1e12\n", top[2])).unwrap();
    fs::write(
        d.join("c.txt"),
        format!(
            "C {} {}@example.org\nC nobody n@example.org\n",
            top[2],
            top[2].replace(' ', ".")
        ),
    )
    .unwrap();
    let filtered = csv_rows(&ok(
        d,
        &[
            &base[..],
            &[
                "--thresholds",
                "t.txt",
                "--contacts",
                "c.txt",
                "--recipients",
                "rcpt.csv",
            ],
        ]
        .concat(),
    ));
    assert_eq!(filtered.len(), all.len() - 1);
    assert!(filtered.iter().all(|r| r[2] != top[2]));
    let recipients = fs::read_to_string(d.join("rcpt.csv")).unwrap();
    assert_eq!(recipients, "author,contact,energy\n");

    let notified = fs::read_to_string(d.join("citeflow-query.manifest.json")).unwrap();
    assert!(notified.contains("\"role\": \"thresholds\""));

    ok(
        d,
        &[
            &base[..],
            &["--contacts", "c.txt", "--recipients", "rcpt.csv"],
        ]
        .concat(),
    );
    let recipients = fs::read_to_string(d.join("rcpt.csv")).unwrap();
    assert_eq!(recipients.lines().count(), 2);
    assert!(recipients.contains("@example.org,"));
}

#[test]
fn references_feed_collaborators() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    ingest(d, &small_corpus());
    ok(
        d,
        &[
            "query",
            "references",
            "--graph",
            "graph.txt",
            "--paper",
            "p1",
            "--oracle",
            "--out",
            "refs.csv",
        ],
    );
    let from_file = ok(
        d,
        &[
            "query",
            "collaborators",
            "--graph",
            "graph.txt",
            "--papers-from",
            "refs.csv",
            "--oracle",
        ],
    );
    let refs = csv_rows(&fs::read_to_string(d.join("refs.csv")).unwrap());
    let mut args = vec!["query", "collaborators", "--graph", "graph.txt", "--oracle"];
    for r in &refs {
        args.extend(["--paper", r[2].as_str()]);
    }
    assert_eq!(from_file, ok(d, &args));
    assert!(csv_rows(&from_file).iter().all(|r| r[1] == "author"));
}

#[test]
fn build_canonicalizes_and_adds_virtual_journals() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    let graph = ingest(d, &small_corpus());
    ok(d, &["build", "--graph", "graph.txt", "--out", "again.txt"]);
    assert_eq!(
        fs::read(&graph).unwrap(),
        fs::read(d.join("again.txt")).unwrap()
    );

    fs::write(
        d.join("vj.txt"),
        "J Reading Group p1\nJ Reading Group p3\nJ Reading Group ghost\n",
    )
    .unwrap();
    let out = citeflow(
        d,
        &[
            "build",
            "--graph",
            "graph.txt",
            "--virtual-journals",
            "vj.txt",
            "--out",
            "vj-graph.txt",
        ],
    );
    assert_eq!(code(&out), 0);
    assert!(String::from_utf8_lossy(&out.stderr).contains("WARN ghost"));
    let stats = ok(d, &["stats", "vj-graph.txt"]);
    assert!(stats.contains("nodes journal 3\n"), "{stats}");
    // Reading Group shares one paper with each publisher, in both directions.
    assert!(stats.contains("edges similar_journal 4 4\n"), "{stats}");

    fs::write(d.join("corpus.xml"), small_corpus().concat()).unwrap();
    ok(
        d,
        &[
            "ingest",
            "corpus.xml",
            "--virtual-journals",
            "vj.txt",
            "--out",
            "direct.txt",
        ],
    );
    assert_eq!(
        fs::read(d.join("direct.txt")).unwrap(),
        fs::read(d.join("vj-graph.txt")).unwrap()
    );
}

#[test]
fn cocitation_author_layer() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    fs::write(d.join("corpus.xml"), small_corpus().concat()).unwrap();
    ok(
        d,
        &[
            "ingest",
            "corpus.xml",
            "--author-layer",
            "cocitation",
            "--out",
            "g.txt",
        ],
    );
    let stats = ok(d, &["stats", "g.txt"]);
    assert!(stats.contains("edges coauthored_with 0 0\n"), "{stats}");
    assert!(!stats.contains("edges cocited_with 0 0\n"), "{stats}");
}

#[test]
fn export_ledger_is_sign_symmetric() {
    let dir = TempDir::new().unwrap();
    let d = dir.path();
    ingest(d, &small_corpus());
    let pos = ok(
        d,
        &[
            "export",
            "--graph",
            "graph.txt",
            "--pos",
            "paper:p1",
            "--neg",
            "author:Eve",
            "--seed",
            "3",
        ],
    );
    let neg = ok(
        d,
        &[
            "export",
            "--graph",
            "graph.txt",
            "--neg",
            "paper:p1",
            "--pos",
            "author:Eve",
            "--seed",
            "3",
        ],
    );
    let pos = read_ledger(&pos).unwrap();
    let neg = read_ledger(&neg).unwrap();
    assert!(!pos.is_empty());
    assert_eq!(pos.len(), neg.len());
    for (node, e) in pos.iter() {
        assert_eq!(neg.get(node), -e, "{node}");
    }
    let out = citeflow(
        d,
        &["export", "--graph", "graph.txt", "--pos", "paper:nope"],
    );
    assert_eq!(code(&out), 1);
}
