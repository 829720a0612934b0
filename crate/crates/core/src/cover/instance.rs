use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::complex::CellComplex;
use crate::error::{CoverError, PolytopeError};
use crate::polytope::{descriptor, BuiltPolytope, PolytopeFile};
use crate::scalar::Scalar;

/// Labeled closed sets, each the closed union of its cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoverInstance {
    labels: Vec<String>,
    sets: Vec<Vec<usize>>,
    /// Labels containing each cell, ascending.
    membership: Vec<Vec<usize>>,
}

impl CoverInstance {
    /// A family of sets; need not cover every cell.
    pub fn family<S: Scalar>(
        complex: &CellComplex<S>,
        labels: Vec<String>,
        sets: Vec<Vec<usize>>,
    ) -> Result<Self, CoverError> {
        if labels.len() != sets.len() {
            return Err(CoverError::InvalidCover("one label per set required".into()));
        }
        let mut membership = vec![Vec::new(); complex.num_cells()];
        let mut clean = Vec::with_capacity(sets.len());
        for (i, mut cells) in sets.into_iter().enumerate() {
            cells.sort_unstable();
            cells.dedup();
            if cells.is_empty() {
                return Err(CoverError::InvalidCover(format!("label {} is empty", labels[i])));
            }
            if let Some(&c) = cells.iter().find(|&&c| c >= complex.num_cells()) {
                return Err(CoverError::InvalidCover(format!("cell {c} does not exist")));
            }
            for &c in &cells {
                membership[c].push(i);
            }
            clean.push(cells);
        }
        Ok(Self { labels, sets: clean, membership })
    }

    /// A cover: every cell must belong to some set.
    pub fn cover<S: Scalar>(
        complex: &CellComplex<S>,
        labels: Vec<String>,
        sets: Vec<Vec<usize>>,
    ) -> Result<Self, CoverError> {
        let out = Self::family(complex, labels, sets)?;
        if let Some(c) = out.membership.iter().position(|m| m.is_empty()) {
            return Err(CoverError::InvalidCover(format!("cell {c} is not covered")));
        }
        Ok(out)
    }

    /// Partition cover from a label per cell; labels are named by index.
    pub fn from_assignment<S: Scalar>(complex: &CellComplex<S>, assignment: &[usize]) -> Result<Self, CoverError> {
        if assignment.len() != complex.num_cells() {
            return Err(CoverError::InvalidCover("one label per cell required".into()));
        }
        let k = assignment.iter().max().map_or(0, |&m| m + 1);
        let mut sets = vec![Vec::new(); k];
        for (c, &l) in assignment.iter().enumerate() {
            sets[l].push(c);
        }
        // drop unused labels, keeping order
        let sets: Vec<Vec<usize>> = sets.into_iter().filter(|s| !s.is_empty()).collect();
        let labels = (0..sets.len()).map(|i| format!("X{}", i + 1)).collect();
        Self::cover(complex, labels, sets)
    }

    pub fn num_labels(&self) -> usize {
        self.sets.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label_index(&self, name: &str) -> Result<usize, CoverError> {
        self.labels.iter().position(|l| l == name).ok_or_else(|| CoverError::UnknownLabel(name.into()))
    }

    pub fn set(&self, label: usize) -> &[usize] {
        &self.sets[label]
    }

    pub fn sets(&self) -> &[Vec<usize>] {
        &self.sets
    }

    pub fn labels_of(&self, cell: usize) -> &[usize] {
        &self.membership[cell]
    }

    pub fn contains(&self, label: usize, cell: usize) -> bool {
        self.membership[cell].binary_search(&label).is_ok()
    }

    pub fn is_cover(&self) -> bool {
        self.membership.iter().all(|m| !m.is_empty())
    }

    /// Adds cells to a label.
    pub fn extend_label(&mut self, label: usize, cells: &[usize]) {
        for &c in cells {
            if !self.contains(label, c) {
                self.sets[label].push(c);
                let m = &mut self.membership[c];
                m.push(label);
                m.sort_unstable();
            }
        }
        self.sets[label].sort_unstable();
    }

    /// Labels whose closed set contains the given complex vertex.
    pub fn labels_at_point<S: Scalar>(&self, complex: &CellComplex<S>, point: usize) -> Vec<usize> {
        let mut out: Vec<usize> =
            complex.point_cells(point).iter().flat_map(|&c| self.membership[c].iter().copied()).collect();
        out.sort_unstable();
        out.dedup();
        out
    }

    /// Maximum number of closed sets through a single point. Attained at a
    /// vertex of the complex, since every point of a face lies in exactly
    /// the cells containing that face.
    pub fn multiplicity<S: Scalar>(&self, complex: &CellComplex<S>) -> usize {
        self.multiplicity_witness(complex).map_or(0, |(_, k)| k)
    }

    /// A vertex attaining the multiplicity, with the count.
    pub fn multiplicity_witness<S: Scalar>(&self, complex: &CellComplex<S>) -> Option<(usize, usize)> {
        (0..complex.num_points())
            .map(|p| (p, self.labels_at_point(complex, p).len()))
            .max_by(|a, b| a.1.cmp(&b.1).then(b.0.cmp(&a.0)))
    }

    /// First vertex covered by more than `limit` sets.
    pub fn violation<S: Scalar>(&self, complex: &CellComplex<S>, limit: usize) -> Option<usize> {
        (0..complex.num_points()).find(|&p| self.labels_at_point(complex, p).len() > limit)
    }

    /// Components of a label under wall adjacency, each sorted, ordered by
    /// smallest cell.
    pub fn components<S: Scalar>(&self, complex: &CellComplex<S>, label: usize) -> Vec<Vec<usize>> {
        components_by(&self.sets[label], |c| complex.wall_neighbors(c).to_vec(), |c| self.contains(label, c))
    }

    /// Connected components of the closed set of a label: cells whose
    /// closures meet are joined.
    pub fn closed_components<S: Scalar>(&self, complex: &CellComplex<S>, label: usize) -> Vec<Vec<usize>> {
        components_by(&self.sets[label], |c| complex.closed_neighbors(c), |c| self.contains(label, c))
    }

    /// Components of the open complement of the union: uncovered cells
    /// joined across walls.
    pub fn complement_components<S: Scalar>(&self, complex: &CellComplex<S>) -> Vec<Vec<usize>> {
        let free: Vec<usize> = (0..complex.num_cells()).filter(|&c| self.membership[c].is_empty()).collect();
        components_by(&free, |c| complex.wall_neighbors(c).to_vec(), |c| self.membership[c].is_empty())
    }

    pub fn to_file(&self, polytope: PolytopeSource, grid: usize) -> CoverFile {
        CoverFile {
            polytope,
            grid,
            sets: self
                .labels
                .iter()
                .zip(&self.sets)
                .map(|(l, s)| LabeledSet { label: l.clone(), cells: s.clone() })
                .collect(),
        }
    }
}

fn components_by(
    seeds: &[usize],
    neighbors: impl Fn(usize) -> Vec<usize>,
    inside: impl Fn(usize) -> bool,
) -> Vec<Vec<usize>> {
    let mut seen = std::collections::HashSet::new();
    let mut out = Vec::new();
    let mut sorted = seeds.to_vec();
    sorted.sort_unstable();
    for &s in &sorted {
        if !seen.insert(s) {
            continue;
        }
        let mut comp = vec![s];
        let mut queue = VecDeque::from([s]);
        while let Some(c) = queue.pop_front() {
            for nb in neighbors(c) {
                if inside(nb) && seen.insert(nb) {
                    comp.push(nb);
                    queue.push_back(nb);
                }
            }
        }
        comp.sort_unstable();
        out.push(comp);
    }
    out
}

/// Where the polytope of a cover file comes from: a builder descriptor or
/// path (a string), or an inline polytope file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum PolytopeSource {
    Named(String),
    Inline(PolytopeFile),
}

impl PolytopeSource {
    /// Builds the polytope; a string is read as a builder descriptor.
    pub fn build<S: Scalar>(&self) -> Result<BuiltPolytope<S>, PolytopeError> {
        match self {
            PolytopeSource::Named(desc) => descriptor::build(desc),
            PolytopeSource::Inline(file) => file.to_built(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LabeledSet {
    pub label: String,
    pub cells: Vec<usize>,
}

/// `{ "polytope", "grid", "sets": [{"label", "cells"}] }`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CoverFile {
    pub polytope: PolytopeSource,
    pub grid: usize,
    pub sets: Vec<LabeledSet>,
}

impl CoverFile {
    pub fn from_json(text: &str) -> Result<Self, CoverError> {
        serde_json::from_str(text).map_err(|e| CoverError::InvalidCover(e.to_string()))
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("serializable")
    }

    fn split(&self) -> (Vec<String>, Vec<Vec<usize>>) {
        self.sets.iter().map(|s| (s.label.clone(), s.cells.clone())).unzip()
    }

    pub fn to_cover<S: Scalar>(&self, complex: &CellComplex<S>) -> Result<CoverInstance, CoverError> {
        let (labels, sets) = self.split();
        CoverInstance::cover(complex, labels, sets)
    }

    pub fn to_family<S: Scalar>(&self, complex: &CellComplex<S>) -> Result<CoverInstance, CoverError> {
        let (labels, sets) = self.split();
        CoverInstance::family(complex, labels, sets)
    }
}
