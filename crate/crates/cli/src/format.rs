//! Text formats: signed graphs, catalogs of cubic graphs, and flow
//! certificates. All parsers report the offending line number.

use sfk_core::flow::{Arithmetic, Flow, HalfDir, Orientation};
use sfk_core::graph::{Sign, SignedGraph};

/// Parse one signed graph. Lines starting with `#` and blank lines are
/// skipped; the first data line is `n m`, followed by exactly m lines
/// `u v s` with s one of `+`/`-`. Edge ids run 0..m-1 in file order;
/// repeated pairs make parallel edges and `u u` makes a loop.
pub fn parse_signed_graph(text: &str) -> Result<SignedGraph, String> {
    let mut data = text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            None
        } else {
            Some((i + 1, line))
        }
    });
    let (header_no, header) = data.next().ok_or("empty input, expected an `n m` header")?;
    let mut it = header.split_whitespace();
    let n: usize = it
        .next()
        .ok_or(format!("line {header_no}: missing vertex count"))?
        .parse()
        .map_err(|_| format!("line {header_no}: bad vertex count"))?;
    let m: usize = it
        .next()
        .ok_or(format!("line {header_no}: missing edge count"))?
        .parse()
        .map_err(|_| format!("line {header_no}: bad edge count"))?;
    if it.next().is_some() {
        return Err(format!("line {header_no}: trailing tokens after `n m`"));
    }

    let mut g = SignedGraph::new(n);
    for _ in 0..m {
        let (no, line) = data
            .next()
            .ok_or(format!("expected {m} edge lines, file ended early"))?;
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let [u, v, s] = tokens[..] else {
            return Err(format!(
                "line {no}: expected `u v s`, got {} tokens",
                tokens.len()
            ));
        };
        let u: usize = u
            .parse()
            .map_err(|_| format!("line {no}: bad vertex `{u}`"))?;
        let v: usize = v
            .parse()
            .map_err(|_| format!("line {no}: bad vertex `{v}`"))?;
        let sign = match s {
            "+" => Sign::Positive,
            "-" => Sign::Negative,
            other => return Err(format!("line {no}: bad sign `{other}`, expected + or -")),
        };
        if u >= n || v >= n {
            return Err(format!("line {no}: vertex out of range, n = {n}"));
        }
        g.add_edge(u, v, sign)
            .map_err(|e| format!("line {no}: {e}"))?;
    }
    if let Some((no, _)) = data.next() {
        return Err(format!("line {no}: extra data after {m} edges"));
    }
    Ok(g)
}

pub fn serialize_signed_graph(g: &SignedGraph) -> String {
    let mut out = format!("{} {}\n", g.n(), g.m());
    for e in g.edges() {
        let s = if e.sign == Sign::Negative { '-' } else { '+' };
        out.push_str(&format!("{} {} {}\n", e.u, e.v, s));
    }
    out
}

/// Parse a catalog: graph blocks separated by a `---` line, every sign `+`
/// (signatures are injected downstream by policy).
pub fn parse_catalog(text: &str) -> Result<Vec<SignedGraph>, String> {
    let mut graphs = Vec::new();
    let mut block = String::new();
    let mut block_start = 1usize;
    let flush =
        |block: &mut String, start: usize, graphs: &mut Vec<SignedGraph>| -> Result<(), String> {
            if block.trim().is_empty() {
                *block = String::new();
                return Ok(());
            }
            let g = parse_signed_graph(block)
                .map_err(|e| format!("catalog block starting near line {start}: {e}"))?;
            if !g.is_all_positive() {
                return Err(format!(
                    "catalog block starting near line {start}: catalog graphs must be all-positive"
                ));
            }
            graphs.push(g);
            *block = String::new();
            Ok(())
        };
    let mut lines = 0usize;
    for (i, line) in text.lines().enumerate() {
        lines = i + 1;
        if line.trim() == "---" {
            flush(&mut block, block_start, &mut graphs)?;
            block_start = i + 2;
        } else {
            block.push_str(line);
            block.push('\n');
        }
    }
    let _ = lines;
    flush(&mut block, block_start, &mut graphs)?;
    if graphs.is_empty() {
        return Err("catalog holds no graphs".to_string());
    }
    Ok(graphs)
}

pub fn serialize_catalog(graphs: &[SignedGraph]) -> String {
    graphs
        .iter()
        .map(serialize_signed_graph)
        .collect::<Vec<_>>()
        .join("---\n")
}

/// A parsed certificate, not yet tied to a graph.
#[derive(Debug, Clone)]
pub struct Certificate {
    pub k: u32,
    pub arithmetic: Arithmetic,
    pub method: String,
    /// (edge id, dir at first endpoint, dir at second endpoint, value)
    pub records: Vec<(usize, HalfDir, HalfDir, i64)>,
}

fn parse_dir(token: &str, no: usize) -> Result<HalfDir, String> {
    match token {
        "i" => Ok(HalfDir::In),
        "o" => Ok(HalfDir::Out),
        other => Err(format!(
            "line {no}: bad direction `{other}`, expected i or o"
        )),
    }
}

fn dir_char(d: HalfDir) -> char {
    match d {
        HalfDir::In => 'i',
        HalfDir::Out => 'o',
    }
}

/// Header `flow 1 <k> <integer|mod> <method>`, then one line per edge:
/// `<edge_id> <dir_at_u> <dir_at_v> <value>` with directions `i`/`o`.
pub fn parse_certificate(text: &str) -> Result<Certificate, String> {
    let mut data = text.lines().enumerate().filter_map(|(i, raw)| {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            None
        } else {
            Some((i + 1, line))
        }
    });
    let (no, header) = data.next().ok_or("empty input, expected a `flow` header")?;
    let tokens: Vec<&str> = header.split_whitespace().collect();
    let [tag, version, k, mode, method] = tokens[..] else {
        return Err(format!(
            "line {no}: expected `flow 1 <k> <integer|mod> <method>`"
        ));
    };
    if tag != "flow" {
        return Err(format!("line {no}: expected a `flow` header, got `{tag}`"));
    }
    if version != "1" {
        return Err(format!("line {no}: unsupported format version `{version}`"));
    }
    let k: u32 = k.parse().map_err(|_| format!("line {no}: bad k `{k}`"))?;
    let arithmetic = match mode {
        "integer" => Arithmetic::Integer,
        "mod" => Arithmetic::ModK,
        other => return Err(format!("line {no}: bad arithmetic `{other}`")),
    };
    let mut records = Vec::new();
    for (no, line) in data {
        let tokens: Vec<&str> = line.split_whitespace().collect();
        let [e, du, dv, value] = tokens[..] else {
            return Err(format!(
                "line {no}: expected `<edge> <i|o> <i|o> <value>`, got {} tokens",
                tokens.len()
            ));
        };
        let e: usize = e
            .parse()
            .map_err(|_| format!("line {no}: bad edge id `{e}`"))?;
        let du = parse_dir(du, no)?;
        let dv = parse_dir(dv, no)?;
        let value: i64 = value
            .parse()
            .map_err(|_| format!("line {no}: bad value `{value}`"))?;
        records.push((e, du, dv, value));
    }
    Ok(Certificate {
        k,
        arithmetic,
        method: method.to_string(),
        records,
    })
}

pub fn serialize_certificate(flow: &Flow, method: &str) -> String {
    let mode = match flow.arithmetic {
        Arithmetic::Integer => "integer",
        Arithmetic::ModK => "mod",
    };
    let mut out = format!("flow 1 {} {} {}\n", flow.k, mode, method);
    for e in 0..flow.values.len() {
        let (du, dv) = flow.orientation.dirs(e);
        out.push_str(&format!(
            "{} {} {} {}\n",
            e,
            dir_char(du),
            dir_char(dv),
            flow.value(e)
        ));
    }
    out
}

/// Tie a certificate to its graph. Every edge must appear exactly once.
/// Shape mismatches come back as messages for the verifier to report.
pub fn certificate_to_flow(cert: &Certificate, g: &SignedGraph) -> Result<Flow, String> {
    if cert.records.len() != g.m() {
        return Err(format!(
            "certificate lists {} edges, graph has {}",
            cert.records.len(),
            g.m()
        ));
    }
    let mut dirs = vec![None; g.m()];
    let mut values = vec![0i64; g.m()];
    for &(e, du, dv, value) in &cert.records {
        if e >= g.m() {
            return Err(format!("certificate edge {e} out of range"));
        }
        if dirs[e].is_some() {
            return Err(format!("certificate repeats edge {e}"));
        }
        dirs[e] = Some((du, dv));
        values[e] = value;
    }
    let dirs: Vec<(HalfDir, HalfDir)> = dirs.into_iter().map(|d| d.unwrap()).collect();
    let orientation = Orientation::from_dirs(dirs);
    Ok(match cert.arithmetic {
        Arithmetic::Integer => Flow::integer(orientation, values, cert.k),
        Arithmetic::ModK => Flow::mod_k(orientation, values, cert.k),
    })
}
