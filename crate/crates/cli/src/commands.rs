use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use citeflow::dissemination::{expected_energy_oracle_with_limit, write_ledger};
use citeflow::graph::{
    parse_virtual_journals, read_graph, with_virtual_journals, write_graph, AuthorLayer,
    VirtualJournals,
};
use citeflow::textfmt::format_sig12;
use citeflow::workflows::{
    parse_reader_thresholds, run_workflow, write_result_csv, RankedResult, ReaderThresholds,
};
use citeflow::{
    build_graph, disseminate, normalize_author_name, BuildOptions, Corpus, DisseminationConfig,
    EdgeKind, Engine, JournalKey, Layer, MultilayerGraph, NodeRef, ProblemModel, RecordId,
    ReviewerSeeding, WorkflowKind, WorkflowOptions, WorkflowRequest,
};

use crate::args::{BuildArgs, EngineArgs, ExportArgs, IngestArgs, QueryArgs, StatsArgs};
use crate::config::resolve_config;
use crate::manifest::{default_manifest_path, sha256_hex, InputDigest, QueryRequest, RunManifest};
use crate::{io_err, read_bytes, read_text, write_file, CliError};

fn domain(e: impl ToString) -> CliError {
    CliError::Domain(e.to_string())
}

/// Files named directly, plus the `*.xml` files of named directories in
/// name order.
fn expand_paths(paths: &[PathBuf]) -> Result<Vec<PathBuf>, CliError> {
    let mut files = Vec::new();
    for path in paths {
        if path.is_dir() {
            let entries = std::fs::read_dir(path)
                .map_err(|e| CliError::Environment(format!("{}: {e}", path.display())))?;
            let mut found: Vec<PathBuf> = entries
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.extension().is_some_and(|x| x == "xml"))
                .collect();
            found.sort();
            files.extend(found);
        } else {
            files.push(path.clone());
        }
    }
    Ok(files)
}

fn load_virtual_journals(path: Option<&Path>) -> Result<VirtualJournals, CliError> {
    match path {
        None => Ok(VirtualJournals::default()),
        Some(p) => parse_virtual_journals(&read_text(p)?)
            .map_err(|e| CliError::Domain(format!("{}: {e}", p.display()))),
    }
}

fn load_graph(path: &Path) -> Result<(MultilayerGraph, String), CliError> {
    let bytes = read_bytes(path)?;
    let digest = sha256_hex(&bytes);
    let text = String::from_utf8(bytes)
        .map_err(|_| CliError::Domain(format!("{}: not valid UTF-8", path.display())))?;
    let graph =
        read_graph(&text).map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))?;
    Ok((graph, digest))
}

fn save_graph(path: &Path, graph: &MultilayerGraph) -> Result<(), CliError> {
    let mut buf = Vec::new();
    write_graph(graph, &mut buf).map_err(io_err)?;
    write_file(path, &buf)
}

fn print_layer_summary(out: &mut dyn Write, graph: &MultilayerGraph) -> Result<(), CliError> {
    let mut lateral: BTreeMap<Layer, usize> = BTreeMap::new();
    let mut vertical = 0;
    for (_, _, kind, _) in graph.edges() {
        if kind.is_lateral() {
            *lateral.entry(kind.endpoints().0).or_default() += 1;
        } else {
            vertical += 1;
        }
    }
    for layer in Layer::ALL {
        writeln!(
            out,
            "{layer} nodes={} lateral_edges={}",
            graph.nodes_in_layer(layer).count(),
            lateral.get(&layer).copied().unwrap_or(0)
        )
        .map_err(io_err)?;
    }
    writeln!(out, "vertical_edges={vertical}").map_err(io_err)
}

pub fn ingest(args: &IngestArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let files = expand_paths(&args.paths)?;
    if files.is_empty() {
        return Err(domain("no input files"));
    }
    let mut corpus = Corpus::new();
    for file in &files {
        let text = read_text(file)?;
        let before = corpus.warnings().len();
        corpus.ingest_str(&text);
        for w in &corpus.warnings()[before..] {
            writeln!(err, "WARN {}:{} {}", file.display(), w.location, w.message)
                .map_err(io_err)?;
        }
    }
    if corpus.is_empty() {
        return Err(domain(citeflow::IngestError::EmptyCorpus));
    }
    let options = BuildOptions {
        author_layer: match args.author_layer.as_str() {
            "cocitation" => AuthorLayer::Cocitation,
            _ => AuthorLayer::Coauthorship,
        },
        virtual_journals: load_virtual_journals(args.virtual_journals.as_deref())?,
    };
    let (graph, build_warnings) = build_graph(&corpus, &options);
    for w in &build_warnings {
        writeln!(err, "{w}").map_err(io_err)?;
    }
    save_graph(&args.out, &graph)?;
    writeln!(out, "records={}", corpus.len()).map_err(io_err)?;
    print_layer_summary(out, &graph)?;
    writeln!(
        out,
        "warnings={}",
        corpus.warnings().len() + build_warnings.len()
    )
    .map_err(io_err)
}

pub fn build(args: &BuildArgs, out: &mut dyn Write, err: &mut dyn Write) -> Result<(), CliError> {
    let (graph, _) = load_graph(&args.graph)?;
    let graph = match &args.virtual_journals {
        None => graph,
        Some(path) => {
            let (graph, warnings) =
                with_virtual_journals(&graph, &load_virtual_journals(Some(path))?);
            for w in &warnings {
                writeln!(err, "{w}").map_err(io_err)?;
            }
            graph
        }
    };
    save_graph(&args.out, &graph)?;
    print_layer_summary(out, &graph)
}

pub fn stats(args: &StatsArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let (graph, _) = load_graph(&args.graph)?;
    for layer in Layer::ALL {
        writeln!(out, "nodes {layer} {}", graph.nodes_in_layer(layer).count()).map_err(io_err)?;
    }
    let mut per_kind: BTreeMap<EdgeKind, (usize, f64)> = BTreeMap::new();
    for (_, _, kind, weight) in graph.edges() {
        let entry = per_kind.entry(kind).or_default();
        entry.0 += 1;
        entry.1 += weight;
    }
    for kind in EdgeKind::ALL {
        let (count, total) = per_kind.get(&kind).copied().unwrap_or_default();
        writeln!(out, "edges {kind} {count} {}", format_sig12(total)).map_err(io_err)?;
    }
    let dead_ends = graph.node_ids().filter(|&id| graph.is_dead_end(id)).count();
    writeln!(out, "dead_ends {dead_ends}").map_err(io_err)
}

fn with_threads<T: Send>(
    threads: Option<usize>,
    f: impl FnOnce() -> T + Send,
) -> Result<T, CliError> {
    match threads {
        None => Ok(f()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Environment(e.to_string()))?;
            Ok(pool.install(f))
        }
    }
}

fn engine_of(args: &EngineArgs) -> Engine {
    if args.oracle {
        Engine::Oracle
    } else {
        Engine::Particles
    }
}

/// Paper keys from the `paper` rows of a result CSV.
fn papers_from_csv(path: &Path) -> Result<Vec<String>, CliError> {
    let text = read_text(path)?;
    let bad = |e: csv::Error| CliError::Domain(format!("{}: {e}", path.display()));
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers().map_err(bad)?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::Domain(format!("{}: no {name} column", path.display())))
    };
    let (layer, key) = (column("layer")?, column("key")?);
    let mut papers = Vec::new();
    for row in reader.records() {
        let row = row.map_err(bad)?;
        if row.get(layer) == Some("paper") {
            papers.push(row.get(key).unwrap_or_default().to_string());
        }
    }
    Ok(papers)
}

/// `C <author-key> <address>` lines; the address is the last token.
fn parse_contacts(path: &Path) -> Result<BTreeMap<String, String>, CliError> {
    let mut contacts = BTreeMap::new();
    for (i, raw) in read_text(path)?.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens[0] != "C" || tokens.len() < 3 {
            return Err(CliError::Domain(format!(
                "{}:{}: expected `C <author-key> <address>`",
                path.display(),
                i + 1
            )));
        }
        let author =
            normalize_author_name(&tokens[1..tokens.len() - 1].join(" ")).map_err(domain)?;
        contacts.insert(
            author.as_str().to_string(),
            tokens[tokens.len() - 1].to_string(),
        );
    }
    Ok(contacts)
}

struct QueryRun {
    workflow: WorkflowKind,
    engine: Engine,
    config: DisseminationConfig,
    request: QueryRequest,
    graph: PathBuf,
    thresholds: Option<PathBuf>,
}

struct QueryOutput {
    csv: Vec<u8>,
    result: RankedResult,
    inputs: Vec<InputDigest>,
}

fn to_request(run: &QueryRun) -> Result<WorkflowRequest, CliError> {
    let papers = run
        .request
        .papers
        .iter()
        .map(|p| RecordId::new(p).map_err(domain))
        .collect::<Result<Vec<_>, _>>()?;
    let coauthors = run
        .request
        .authors
        .iter()
        .map(|a| normalize_author_name(a).map_err(domain))
        .collect::<Result<Vec<_>, _>>()?;
    let reviewing_journal = match &run.request.journal {
        None => None,
        Some(j) => Some(JournalKey::new(j).ok_or_else(|| domain("empty journal name"))?),
    };
    let mut request = WorkflowRequest {
        related_papers: papers,
        coauthors,
        reviewing_journal,
        result_limit: run.request.limit,
        threshold: run.request.threshold,
        ..WorkflowRequest::new(run.workflow)
    };
    if run.workflow == WorkflowKind::References {
        if request.related_papers.len() > 1 {
            return Err(domain(
                "references takes exactly one --paper (the keystone)",
            ));
        }
        request.keystone_paper = request.related_papers.pop();
    }
    Ok(request)
}

fn execute(run: &QueryRun, threads: Option<usize>) -> Result<QueryOutput, CliError> {
    let (graph, graph_digest) = load_graph(&run.graph)?;
    let mut inputs = vec![InputDigest {
        role: "graph".into(),
        path: run.graph.clone(),
        sha256: graph_digest,
    }];
    let reader_thresholds = match &run.thresholds {
        None => ReaderThresholds::default(),
        Some(path) => {
            let bytes = read_bytes(path)?;
            inputs.push(InputDigest {
                role: "thresholds".into(),
                path: path.clone(),
                sha256: sha256_hex(&bytes),
            });
            let text = String::from_utf8(bytes)
                .map_err(|_| CliError::Domain(format!("{}: not valid UTF-8", path.display())))?;
            parse_reader_thresholds(&text)
                .map_err(|e| CliError::Domain(format!("{}: {e}", path.display())))?
        }
    };
    let options = WorkflowOptions {
        config: run.config.clone(),
        engine: run.engine,
        exclude_seeds: run.request.exclude_seeds,
        reviewer_seeding: run.request.reviewer_seeding,
        reader_thresholds,
        oracle_max_nodes: run.request.oracle_max_nodes,
    };
    let request = to_request(run)?;
    let result = with_threads(threads, || run_workflow(&graph, &request, &options))??;
    let mut csv = Vec::new();
    write_result_csv(&result, &mut csv).map_err(|e| CliError::Environment(e.to_string()))?;
    Ok(QueryOutput {
        csv,
        result,
        inputs,
    })
}

fn emit(out: &mut dyn Write, path: Option<&Path>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => write_file(p, bytes),
        None => out.write_all(bytes).map_err(io_err),
    }
}

fn replay(manifest_path: &Path, args: &QueryArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let manifest: RunManifest = serde_json::from_str(&read_text(manifest_path)?)
        .map_err(|e| CliError::Domain(format!("{}: {e}", manifest_path.display())))?;
    let graph = manifest
        .input("graph")
        .ok_or_else(|| domain("manifest names no graph input"))?;
    let run = QueryRun {
        workflow: manifest.workflow,
        engine: manifest.engine,
        config: manifest.config.clone(),
        request: manifest.request.clone(),
        graph: graph.path.clone(),
        thresholds: manifest.input("thresholds").map(|i| i.path.clone()),
    };
    let output = execute(&run, args.engine.threads)?;
    for (now, then) in output.inputs.iter().zip(&manifest.inputs) {
        if now.sha256 != then.sha256 {
            return Err(CliError::Domain(format!(
                "{} changed since the recorded run",
                then.path.display()
            )));
        }
    }
    if sha256_hex(&output.csv) != manifest.output_sha256 {
        return Err(domain("replayed output differs from the recorded digest"));
    }
    emit(out, args.out.as_deref(), &output.csv)
}

pub fn query(args: &QueryArgs, out: &mut dyn Write) -> Result<(), CliError> {
    if let Some(manifest) = &args.replay {
        return replay(manifest, args, out);
    }
    let workflow = args.kind.expect("required by clap");
    let mut papers = args.paper.clone();
    if let Some(path) = &args.papers_from {
        papers.extend(papers_from_csv(path)?);
    }
    let authors = args
        .author
        .iter()
        .map(|a| {
            normalize_author_name(a)
                .map(|k| k.as_str().to_string())
                .map_err(domain)
        })
        .collect::<Result<Vec<_>, _>>()?;
    let config = resolve_config(&args.engine)?;
    let run = QueryRun {
        workflow,
        engine: engine_of(&args.engine),
        config,
        request: QueryRequest {
            papers,
            authors,
            journal: args.journal.clone(),
            threshold: args.threshold,
            limit: args.limit,
            exclude_seeds: args.exclude_seeds.unwrap_or(true),
            reviewer_seeding: if args.cited_authors {
                ReviewerSeeding::CitedAuthors
            } else {
                ReviewerSeeding::ReferencedPapers
            },
            oracle_max_nodes: args.engine.oracle_max_nodes,
        },
        graph: args.graph.clone().expect("required by clap"),
        thresholds: args.thresholds.clone(),
    };

    let started = Instant::now();
    let output = execute(&run, args.engine.threads)?;
    let elapsed = started.elapsed().as_secs_f64();

    if let Some(contacts) = &args.contacts {
        let contacts = parse_contacts(contacts)?;
        let mut w = csv::Writer::from_writer(Vec::new());
        let header = w.write_record(["author", "contact", "energy"]);
        header.map_err(|e| CliError::Environment(e.to_string()))?;
        for e in &output.result.entries {
            if let Some(contact) = contacts.get(e.node.key()) {
                w.write_record([e.node.key(), contact, &format_sig12(e.energy)])
                    .map_err(|e| CliError::Environment(e.to_string()))?;
            }
        }
        let bytes = w
            .into_inner()
            .map_err(|e| CliError::Environment(e.to_string()))?;
        write_file(
            args.recipients.as_deref().expect("required by clap"),
            &bytes,
        )?;
    }

    let manifest = RunManifest {
        tool: "citeflow".to_string(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        workflow,
        engine: run.engine,
        rng_seed: run.config.rng_seed,
        config: run.config.clone(),
        request: run.request.clone(),
        inputs: output.inputs,
        output_sha256: sha256_hex(&output.csv),
        wall_clock_seconds: args.record_timing.then_some(elapsed),
    };
    let manifest_path = args
        .manifest
        .clone()
        .unwrap_or_else(|| default_manifest_path(args.out.as_deref()));
    let mut json =
        serde_json::to_vec_pretty(&manifest).map_err(|e| CliError::Environment(e.to_string()))?;
    json.push(b'\n');
    emit(out, args.out.as_deref(), &output.csv)?;
    write_file(&manifest_path, &json)
}

pub fn export(args: &ExportArgs, out: &mut dyn Write) -> Result<(), CliError> {
    let parse = |s: &String| s.parse::<NodeRef>().map_err(domain);
    let positive = args.pos.iter().map(parse).collect::<Result<Vec<_>, _>>()?;
    let negative = args.neg.iter().map(parse).collect::<Result<Vec<_>, _>>()?;
    let problem = ProblemModel::new(positive, negative)?;
    let config = resolve_config(&args.engine)?;
    let (graph, _) = load_graph(&args.graph)?;
    let ledger = with_threads(args.engine.threads, || match engine_of(&args.engine) {
        Engine::Particles => disseminate(&graph, &problem, &config),
        Engine::Oracle => expected_energy_oracle_with_limit(
            &graph,
            &problem,
            &config,
            args.engine.oracle_max_nodes,
        ),
    })??;
    let mut buf = Vec::new();
    write_ledger(&ledger, &mut buf).map_err(io_err)?;
    emit(out, args.out.as_deref(), &buf)
}
