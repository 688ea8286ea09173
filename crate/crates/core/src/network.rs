//! Country collaboration network: joint paper counts, the Jaccard degree of
//! collaboration, and binary-adjacency centralities.

use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::ingest::Corpus;
use crate::profiles::CountryProfile;

/// Unordered country pair, stored with the smaller code first.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PairKey(pub String, pub String);

impl PairKey {
    pub fn new(a: &str, b: &str) -> Self {
        if a <= b {
            PairKey(a.to_string(), b.to_string())
        } else {
            PairKey(b.to_string(), a.to_string())
        }
    }
}

/// C_ij: number of papers shared by each pair of countries. A paper with m
/// distinct countries increments each of its m(m-1)/2 pairs once.
pub fn joint_counts(corpus: &Corpus) -> BTreeMap<PairKey, u64> {
    let mut out = BTreeMap::new();
    for paper in &corpus.papers {
        let countries: Vec<&str> = corpus.countries_of(paper).into_iter().collect();
        for (i, a) in countries.iter().enumerate() {
            for b in &countries[i + 1..] {
                *out.entry(PairKey::new(a, b)).or_insert(0) += 1;
            }
        }
    }
    out
}

/// Jaccard overlap of two countries' paper sets: c_ij / (c_i + c_j - c_ij).
pub fn dic(c_i: u64, c_j: u64, c_ij: u64) -> Result<f64> {
    if c_ij > c_i || c_ij > c_j || c_i + c_j - c_ij == 0 {
        return Err(Error::InconsistentCounts { c_i, c_j, c_ij });
    }
    Ok(c_ij as f64 / (c_i + c_j - c_ij) as f64)
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct CollabNetwork {
    /// Sorted, distinct ISO codes.
    pub nodes: Vec<String>,
    /// Joint paper counts; only pairs with a positive count are stored.
    pub edges: BTreeMap<PairKey, u64>,
}

impl CollabNetwork {
    pub fn new(nodes: impl IntoIterator<Item = String>, counts: &BTreeMap<PairKey, u64>) -> Self {
        let nodes: BTreeSet<String> = nodes.into_iter().collect();
        let edges = counts
            .iter()
            .filter(|(k, &c)| c > 0 && k.0 != k.1 && nodes.contains(&k.0) && nodes.contains(&k.1))
            .map(|(k, &c)| (k.clone(), c))
            .collect();
        CollabNetwork {
            nodes: nodes.into_iter().collect(),
            edges,
        }
    }

    /// Network over every country appearing in the corpus.
    pub fn from_corpus(corpus: &Corpus) -> Self {
        let nodes: BTreeSet<String> = corpus
            .papers
            .iter()
            .flat_map(|p| corpus.countries_of(p))
            .map(str::to_string)
            .collect();
        CollabNetwork::new(nodes, &joint_counts(corpus))
    }

    /// Unweighted neighbour lists indexed like `nodes`.
    fn adjacency(&self) -> Vec<Vec<usize>> {
        let index: BTreeMap<&str, usize> = self.nodes.iter().enumerate().map(|(i, n)| (n.as_str(), i)).collect();
        let mut adj = vec![Vec::new(); self.nodes.len()];
        for PairKey(a, b) in self.edges.keys() {
            let (i, j) = (index[a.as_str()], index[b.as_str()]);
            adj[i].push(j);
            adj[j].push(i);
        }
        adj
    }

    fn position(&self, country: &str) -> Result<usize> {
        self.nodes
            .binary_search_by(|n| n.as_str().cmp(country))
            .map_err(|_| Error::UnknownCountry(country.to_string()))
    }

    pub fn degree(&self, country: &str) -> Result<usize> {
        self.position(country)?;
        Ok(self
            .edges
            .keys()
            .filter(|PairKey(a, b)| a == country || b == country)
            .count())
    }
}

/// Relative degree centrality: degree / (N - 1).
pub fn rdc(network: &CollabNetwork, country: &str) -> Result<f64> {
    let n = network.nodes.len();
    if n < 2 {
        return Err(Error::TooFewNodes(n));
    }
    Ok(network.degree(country)? as f64 / (n - 1) as f64)
}

/// Node indices of the largest connected component; ties go to the
/// component holding the lexicographically smallest code.
fn largest_component(adj: &[Vec<usize>]) -> Vec<usize> {
    let mut seen = vec![false; adj.len()];
    let mut best: Vec<usize> = Vec::new();
    for start in 0..adj.len() {
        if seen[start] {
            continue;
        }
        let mut component = vec![start];
        seen[start] = true;
        let mut head = 0;
        while head < component.len() {
            let v = component[head];
            head += 1;
            for &w in &adj[v] {
                if !seen[w] {
                    seen[w] = true;
                    component.push(w);
                }
            }
        }
        if component.len() > best.len() {
            best = component;
        }
    }
    best.sort_unstable();
    best
}

/// Shortest-path betweenness on the largest connected component, normalized
/// by (n-1)(n-2)/2 with n the component size. Nodes outside it score 0.
///
/// Brandes accumulation over one BFS per source.
pub fn betweenness(network: &CollabNetwork) -> BTreeMap<String, f64> {
    let adj = network.adjacency();
    let lcc = largest_component(&adj);
    let n = lcc.len();
    let mut score = vec![0.0; adj.len()];
    if n > 2 {
        for &s in &lcc {
            let mut stack = Vec::with_capacity(n);
            let mut preds: Vec<Vec<usize>> = vec![Vec::new(); adj.len()];
            let mut sigma = vec![0.0f64; adj.len()];
            let mut dist = vec![usize::MAX; adj.len()];
            sigma[s] = 1.0;
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            while let Some(v) = queue.pop_front() {
                stack.push(v);
                for &w in &adj[v] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[v] + 1;
                        queue.push_back(w);
                    }
                    if dist[w] == dist[v] + 1 {
                        sigma[w] += sigma[v];
                        preds[w].push(v);
                    }
                }
            }
            let mut delta = vec![0.0; adj.len()];
            while let Some(w) = stack.pop() {
                for &v in &preds[w] {
                    delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
                }
                if w != s {
                    score[w] += delta[w];
                }
            }
        }
        // each unordered pair was visited from both ends
        let norm = 2.0 * ((n - 1) * (n - 2)) as f64 / 2.0;
        for &v in &lcc {
            score[v] /= norm;
        }
    }
    network.nodes.iter().cloned().zip(score).collect()
}

/// Classic closeness (n-1) / Σ distances on the largest connected
/// component; nodes outside it score 0.
pub fn closeness(network: &CollabNetwork) -> BTreeMap<String, f64> {
    let adj = network.adjacency();
    let lcc = largest_component(&adj);
    let mut score = vec![0.0; adj.len()];
    if lcc.len() > 1 {
        for &s in &lcc {
            let mut dist = vec![usize::MAX; adj.len()];
            dist[s] = 0;
            let mut queue = VecDeque::from([s]);
            let mut total = 0usize;
            while let Some(v) = queue.pop_front() {
                total += dist[v];
                for &w in &adj[v] {
                    if dist[w] == usize::MAX {
                        dist[w] = dist[v] + 1;
                        queue.push_back(w);
                    }
                }
            }
            score[s] = (lcc.len() - 1) as f64 / total as f64;
        }
    }
    network.nodes.iter().cloned().zip(score).collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct CentralityScores {
    pub country: String,
    pub degree: usize,
    pub rdc: f64,
    pub betweenness: f64,
    pub closeness: f64,
}

/// All three centralities per node, in node order. RDC is 0 for a network
/// with fewer than two nodes.
pub fn centralities(network: &CollabNetwork) -> Vec<CentralityScores> {
    let between = betweenness(network);
    let close = closeness(network);
    network
        .nodes
        .iter()
        .map(|c| CentralityScores {
            country: c.clone(),
            degree: network.degree(c).unwrap_or(0),
            rdc: rdc(network, c).unwrap_or(0.0),
            betweenness: between[c],
            closeness: close[c],
        })
        .collect()
}

/// Subgraph induced by the `k` most productive countries (largest
/// `n_papers`, ties broken by ISO code).
pub fn top_k_subnetwork(network: &CollabNetwork, profiles: &[CountryProfile], k: usize) -> CollabNetwork {
    let present: BTreeSet<&str> = network.nodes.iter().map(String::as_str).collect();
    let mut ranked: Vec<(&str, u64)> = network
        .nodes
        .iter()
        .map(|n| {
            let papers = profiles.iter().find(|p| &p.country == n).map_or(0, |p| p.n_papers);
            (n.as_str(), papers)
        })
        .collect();
    ranked.sort_by(|x, y| y.1.cmp(&x.1).then(x.0.cmp(y.0)));
    let keep: BTreeSet<String> = ranked
        .into_iter()
        .take(k)
        .filter(|(n, _)| present.contains(n))
        .map(|(n, _)| n.to_string())
        .collect();
    CollabNetwork::new(keep, &network.edges)
}
