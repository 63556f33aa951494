use std::collections::HashSet;

use super::ComplexError;

/// Dimensions of a finite graded vector space over the degree window
/// `[min_deg, max_deg]`, with a global indexing of basis elements ordered by
/// degree.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Shape {
    min_deg: i32,
    dims: Vec<usize>,
    offsets: Vec<usize>,
}

impl Shape {
    pub fn new(min_deg: i32, dims: Vec<usize>) -> Self {
        let mut offsets = Vec::with_capacity(dims.len() + 1);
        let mut acc = 0;
        offsets.push(0);
        for d in &dims {
            acc += d;
            offsets.push(acc);
        }
        Shape {
            min_deg,
            dims,
            offsets,
        }
    }

    pub fn empty() -> Self {
        Shape::new(0, Vec::new())
    }

    pub fn min_deg(&self) -> i32 {
        self.min_deg
    }

    /// Top degree of the window; `min_deg - 1` for an empty window.
    pub fn max_deg(&self) -> i32 {
        self.min_deg + self.dims.len() as i32 - 1
    }

    pub fn degrees(&self) -> std::ops::RangeInclusive<i32> {
        self.min_deg..=self.max_deg()
    }

    pub fn dim(&self, deg: i32) -> usize {
        self.slot(deg).map_or(0, |s| self.dims[s])
    }

    pub fn total(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    /// Global index of the first basis element in degree `deg`.
    pub fn offset(&self, deg: i32) -> usize {
        if deg < self.min_deg {
            0
        } else {
            match self.slot(deg) {
                Some(s) => self.offsets[s],
                None => self.total(),
            }
        }
    }

    pub fn global(&self, deg: i32, local: usize) -> usize {
        debug_assert!(local < self.dim(deg));
        self.offset(deg) + local
    }

    /// Global index range of degree `deg`.
    pub fn range(&self, deg: i32) -> std::ops::Range<usize> {
        let start = self.offset(deg);
        start..start + self.dim(deg)
    }

    pub fn degree_of(&self, global: usize) -> i32 {
        assert!(global < self.total(), "basis index out of range");
        let s = self.offsets.partition_point(|&o| o <= global) - 1;
        self.min_deg + s as i32
    }

    pub fn locate(&self, global: usize) -> (i32, usize) {
        let d = self.degree_of(global);
        (d, global - self.offset(d))
    }

    fn slot(&self, deg: i32) -> Option<usize> {
        if deg < self.min_deg || deg > self.max_deg() {
            None
        } else {
            Some((deg - self.min_deg) as usize)
        }
    }
}

/// Per-degree ordered basis labels. Order within a degree is declaration
/// order and drives every pivot-based choice downstream.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GradedBasis {
    shape: Shape,
    labels: Vec<String>,
}

impl GradedBasis {
    /// `labels[k]` lists the basis of degree `min_deg + k`.
    pub fn new(min_deg: i32, labels: Vec<Vec<String>>) -> Result<Self, ComplexError> {
        for (k, layer) in labels.iter().enumerate() {
            let mut seen = HashSet::new();
            for l in layer {
                if !seen.insert(l) {
                    return Err(ComplexError::DuplicateLabel {
                        degree: min_deg + k as i32,
                        label: l.clone(),
                    });
                }
            }
        }
        let shape = Shape::new(min_deg, labels.iter().map(|l| l.len()).collect());
        Ok(GradedBasis {
            shape,
            labels: labels.into_iter().flatten().collect(),
        })
    }

    /// Generated labels `{prefix}{deg}_{i}`.
    pub fn generated(shape: &Shape, prefix: &str) -> Self {
        let labels = shape
            .degrees()
            .map(|d| {
                (0..shape.dim(d))
                    .map(|i| format!("{prefix}{d}_{i}"))
                    .collect()
            })
            .collect();
        GradedBasis::new(shape.min_deg(), labels).expect("generated labels are unique")
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn label(&self, global: usize) -> &str {
        &self.labels[global]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn labels_in(&self, deg: i32) -> &[String] {
        &self.labels[self.shape.range(deg)]
    }

    /// Global index of the first basis element carrying `label`.
    pub fn find(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn degree_of(&self, global: usize) -> i32 {
        self.shape.degree_of(global)
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }
}
