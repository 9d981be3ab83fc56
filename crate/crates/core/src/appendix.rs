//! Printed skew-symmetric realizations for the five-vertex graphs.

use serde::Serialize;

use crate::data::skew_five_vertex_table;
use crate::graph::GeneralGraph;
use crate::mlist::MultiplicityList;
use crate::numeric::{bisect_root, verify_realization, DenseMatrix, RealizationVerdict};

#[derive(Clone, Debug, Serialize)]
pub struct AppendixEntry {
    pub atlas_id: u32,
    /// Distinguishes two printed matrices for the same graph and list.
    pub variant: usize,
    pub claim: MultiplicityList,
    pub matrix: DenseMatrix,
}

impl AppendixEntry {
    pub fn name(&self) -> String {
        let suffix = if self.variant > 1 {
            format!("#{}", self.variant)
        } else {
            String::new()
        };
        format!("G{} {}{suffix}", self.atlas_id, self.claim)
    }

    /// Graph of this atlas number, as listed in the five-vertex skew table.
    pub fn graph(&self) -> GeneralGraph {
        let row = skew_five_vertex_table()
            .into_iter()
            .find(|r| r.atlas_id == self.atlas_id)
            .expect("appendix graphs are in the skew table");
        GeneralGraph::from_graph6(&row.graph6).expect("shipped graph6 is valid")
    }

    pub fn verify(&self) -> RealizationVerdict {
        verify_realization(&self.matrix, &self.graph(), &self.claim, true)
    }
}

const ROOT_TOL: f64 = 1e-13;

/// The three quartic roots used in the G52 matrix: the negative root of
/// `x^4 - 4x - 1`, the positive root of `x^4 + 2x^2 - 7` and the negative
/// root of `x^4 + 4x - 1`.
pub fn g52_roots() -> [f64; 3] {
    let a = bisect_root(|x| x.powi(4) - 4.0 * x - 1.0, -0.5, 0.0, ROOT_TOL).expect("bracketed");
    let b = bisect_root(|x| x.powi(4) + 2.0 * x * x - 7.0, 1.0, 2.0, ROOT_TOL).expect("bracketed");
    let c = bisect_root(|x| x.powi(4) + 4.0 * x - 1.0, -2.0, -1.0, ROOT_TOL).expect("bracketed");
    [a, b, c]
}

fn entry(atlas_id: u32, variant: usize, claim: &[usize], rows: [[f64; 5]; 5]) -> AppendixEntry {
    AppendixEntry {
        atlas_id,
        variant,
        claim: MultiplicityList::new(claim.to_vec()).expect("printed lists are valid"),
        matrix: DenseMatrix::from_rows(&rows.map(|r| r.to_vec())).expect("5x5"),
    }
}

/// Every printed matrix, in printed order.
pub fn appendix_realizations() -> Vec<AppendixEntry> {
    let r2 = 2f64.sqrt();
    let r3 = 3f64.sqrt();
    let s52 = 2.5f64.sqrt();
    let [a, b, c] = g52_roots();
    let l131 = [1, 3, 1];
    let l212 = [2, 1, 2];
    vec![
        entry(
            44,
            1,
            &l131,
            [
                [0., 0., -1., -1., -1.],
                [0., 0., -1., -1., -1.],
                [1., 1., 0., 0., 0.],
                [1., 1., 0., 0., 0.],
                [1., 1., 0., 0., 0.],
            ],
        ),
        entry(
            44,
            1,
            &l212,
            [
                [0., 0., 1., 1., 1.],
                [0., 0., 1. / r2, r2, -r2],
                [-1., -1. / r2, 0., 0., 0.],
                [-1., -r2, 0., 0., 0.],
                [-1., r2, 0., 0., 0.],
            ],
        ),
        entry(
            45,
            1,
            &l212,
            [
                [0., 1., 2., 1., 0.],
                [-1., 0., 2., -1., 0.],
                [-2., -2., 0., 0.5, 0.],
                [-1., 1., -0.5, 0., -3. * r3 / 2.],
                [0., 0., 0., 3. * r3 / 2., 0.],
            ],
        ),
        entry(
            46,
            1,
            &l131,
            [
                [0., 0., 0., 1., 1.],
                [0., 0., 0., 1., 1.],
                [0., 0., 0., 1., 1.],
                [-1., -1., -1., 0., 1.],
                [-1., -1., -1., -1., 0.],
            ],
        ),
        entry(
            47,
            1,
            &l212,
            [
                [0., 1., 0., 0., 1.],
                [-1., 0., -1., -1. / r3, -1. / r3],
                [0., 1., 0., -1., 0.],
                [0., 1. / r3, 1., 0., -2. / r3],
                [-1., 1. / r3, 0., 2. / r3, 0.],
            ],
        ),
        entry(
            47,
            2,
            &l212,
            [
                [0., 1., 0., 0., -r2],
                [-1., 0., 1.5, 0., 0.5],
                [0., -1.5, 0., 1., -1. / r2],
                [0., 0., -1., 0., 1.],
                [r2, -0.5, 1. / r2, -1., 0.],
            ],
        ),
        entry(
            48,
            1,
            &l212,
            [
                [0., 0., 1., 1., 1.],
                [0., 0., 0.5, -2., 0.5],
                [-1., -0.5, 0., 0., -s52],
                [-1., 2., 0., 0., 0.],
                [-1., -0.5, s52, 0., 0.],
            ],
        ),
        entry(
            49,
            1,
            &l212,
            [
                [0., 0., -3. * r3 / 2., 1., 1.],
                [0., 0., 0., 1., -2.],
                [3. * r3 / 2., 0., 0., 1., -0.5],
                [-1., -1., -1., 0., -r3],
                [-1., 2., 0.5, r3, 0.],
            ],
        ),
        entry(
            50,
            1,
            &l212,
            [
                [0., 1., 0., 1., 1.],
                [-1., 0., 1., 0., 1.],
                [0., -1., 0., -1., 1.],
                [-1., 0., 1., 0., -1.],
                [-1., -1., -1., 1., 0.],
            ],
        ),
        entry(
            50,
            1,
            &l131,
            [
                [0., 1., 0., 1., 1.],
                [-1., 0., 1., 0., 1.],
                [0., -1., 0., -1., -1.],
                [-1., 0., 1., 0., 1.],
                [-1., -1., 1., -1., 0.],
            ],
        ),
        entry(
            51,
            1,
            &l212,
            [
                [0., 1., 0., 1., 1.],
                [-1., 0., 1., 1., -1.],
                [0., -1., 0., -1. / 3., -1. / 3.],
                [-1., -1., 1. / 3., 0., 4. / 3.],
                [-1., 1., 1. / 3., -4. / 3., 0.],
            ],
        ),
        entry(
            51,
            1,
            &l131,
            [
                [0., 0., 1., 1., -1.],
                [0., 0., 1., 1., -1.],
                [-1., -1., 0., 1., 1.],
                [-1., -1., -1., 0., 2.],
                [1., 1., -1., -2., 0.],
            ],
        ),
        entry(
            52,
            1,
            &l212,
            [
                [0., a, b, c, 1.],
                [-a, 0., 1., 1., 1.],
                [-b, -1., 0., 1., 1.],
                [-c, -1., -1., 0., 1.],
                [-1., -1., -1., -1., 0.],
            ],
        ),
        entry(
            52,
            1,
            &l131,
            [
                [0., 1., 1., 0.5, -1.],
                [-1., 0., 1., 1., 1.],
                [-1., -1., 0., 0.5, 2.],
                [-0.5, -1., -0.5, 0., 1.5],
                [1., -1., -2., -1.5, 0.],
            ],
        ),
    ]
}
