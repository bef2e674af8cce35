//! JSON, CSV and DOT writers shared by the subcommands.

use btq_core::exact::{ChainComplex, FgAbGroup, SparseMatrix};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Clone, Copy, Debug, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Csv,
}

impl Format {
    pub fn name(self) -> &'static str {
        match self {
            Format::Json => "json",
            Format::Dot => "dot",
            Format::Csv => "csv",
        }
    }
}

pub fn unsupported_format<T>(command: &str, f: Format) -> CliResult<T> {
    Err(CliError::Invalid(format!("{command} does not emit {}", f.name())))
}

pub fn to_json<T: Serialize>(value: &T) -> CliResult<String> {
    let mut s = serde_json::to_string_pretty(value).map_err(anyhow::Error::from)?;
    s.push('\n');
    Ok(s)
}

/// One boundary map in coordinate form: `[row, column, value]` triples.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct BoundaryJson {
    /// Source degree of the map.
    pub degree: i64,
    pub entries: Vec<[i64; 3]>,
}

/// The shared chain-complex exchange format.
#[derive(Clone, Debug, Serialize, Deserialize, PartialEq, Eq)]
#[serde(deny_unknown_fields)]
pub struct ChainComplexJson {
    pub min_degree: i64,
    pub dims: Vec<usize>,
    pub boundaries: Vec<BoundaryJson>,
}

impl ChainComplexJson {
    pub fn from_complex(c: &ChainComplex) -> ChainComplexJson {
        let boundaries = (c.min_degree() + 1..=c.max_degree())
            .map(|n| {
                let d = c.boundary(n);
                let mut entries = Vec::with_capacity(d.nnz());
                for (j, col) in d.columns().iter().enumerate() {
                    for &(i, v) in col {
                        entries.push([i as i64, j as i64, v]);
                    }
                }
                entries.sort_unstable();
                BoundaryJson { degree: n, entries }
            })
            .collect();
        ChainComplexJson { min_degree: c.min_degree(), dims: c.dims().to_vec(), boundaries }
    }

    pub fn to_complex(&self) -> CliResult<ChainComplex> {
        let bad = |m: String| CliError::Invalid(m);
        if self.dims.is_empty() {
            return Err(bad("a complex needs at least one degree".into()));
        }
        if self.boundaries.len() + 1 != self.dims.len() {
            return Err(bad("need exactly one boundary per consecutive pair of degrees".into()));
        }
        let mut mats = Vec::new();
        for (i, b) in self.boundaries.iter().enumerate() {
            let degree = self.min_degree + i as i64 + 1;
            if b.degree != degree {
                return Err(bad(format!("boundaries must be listed by degree; expected {degree}, found {}", b.degree)));
            }
            let (rows, cols) = (self.dims[i], self.dims[i + 1]);
            let mut columns: Vec<Vec<(usize, i64)>> = vec![Vec::new(); cols];
            for &[r, c, v] in &b.entries {
                if r < 0 || c < 0 || r as usize >= rows || c as usize >= cols {
                    return Err(bad(format!("entry ({r}, {c}) outside the {rows}x{cols} boundary of degree {degree}")));
                }
                if v != 0 {
                    columns[c as usize].push((r as usize, v));
                }
            }
            for col in &mut columns {
                col.sort_unstable();
                if col.windows(2).any(|w| w[0].0 == w[1].0) {
                    return Err(bad(format!("repeated entry in the boundary of degree {degree}")));
                }
            }
            mats.push(SparseMatrix::from_columns(rows, columns));
        }
        ChainComplex::new(self.min_degree, self.dims.clone(), mats).map_err(|e| bad(e.to_string()))
    }
}

/// A homology group as free rank plus invariant factors.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct GroupJson {
    pub free_rank: usize,
    pub torsion: Vec<String>,
    pub display: String,
}

impl GroupJson {
    pub fn new(g: &FgAbGroup) -> GroupJson {
        GroupJson { free_rank: g.rank(), torsion: g.torsion().iter().map(|t| t.to_string()).collect(), display: g.pretty() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct HomologyRow {
    pub degree: i64,
    #[serde(flatten)]
    pub group: GroupJson,
}

pub fn homology_rows(min_degree: i64, groups: &[FgAbGroup]) -> Vec<HomologyRow> {
    groups.iter().enumerate().map(|(i, g)| HomologyRow { degree: min_degree + i as i64, group: GroupJson::new(g) }).collect()
}

/// `degree,free_rank,torsion` with invariant factors separated by spaces.
pub fn homology_csv(min_degree: i64, groups: &[FgAbGroup]) -> String {
    let mut out = String::from("degree,free_rank,torsion\n");
    for (i, g) in groups.iter().enumerate() {
        let t: Vec<String> = g.torsion().iter().map(|x| x.to_string()).collect();
        out.push_str(&format!("{},{},{}\n", min_degree + i as i64, g.rank(), t.join(" ")));
    }
    out
}

/// A grid indexed `[p][q]`, written with one row per `q` and one column per
/// `p`.
pub fn grid_csv(title: &str, grid: &[Vec<FgAbGroup>]) -> String {
    let q_len = grid.iter().map(Vec::len).max().unwrap_or(0);
    let mut out = format!("# {title}\nq\\p");
    for p in 0..grid.len() {
        out.push_str(&format!(",{p}"));
    }
    out.push('\n');
    for q in 0..q_len {
        out.push_str(&q.to_string());
        for col in grid {
            out.push(',');
            out.push_str(&col.get(q).map(FgAbGroup::pretty).unwrap_or_default());
        }
        out.push('\n');
    }
    out
}

pub fn grid_strings(grid: &[Vec<FgAbGroup>]) -> Vec<Vec<String>> {
    grid.iter().map(|col| col.iter().map(FgAbGroup::pretty).collect()).collect()
}

/// An undirected graph in DOT syntax.
pub fn dot_graph(name: &str, labels: &[String], edges: &[(usize, usize)]) -> String {
    let mut out = format!("graph \"{name}\" {{\n");
    for (i, l) in labels.iter().enumerate() {
        out.push_str(&format!("  {i} [label=\"{}\"];\n", l.replace('"', "\\\"")));
    }
    for (a, b) in edges {
        out.push_str(&format!("  {a} -- {b};\n"));
    }
    out.push_str("}\n");
    out
}
