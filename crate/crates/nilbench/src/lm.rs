//! Column representation of a semigroup on one layer of a principal series.
//!
//! For a layer whose principal factor is an inverse square Rees matrix
//! semigroup M^0(G, q, q; I_q), every element s of the ambient semigroup acts
//! on the q columns (L-classes) of the layer by right multiplication: the
//! column of y·s when the product stays in the layer, theta otherwise. This
//! action Gamma is a homomorphism into the partial maps on the columns, and
//! the group coordinate of y·s defines the cocycle Psi.

use crate::error::{Error, Result};
use crate::green::{rees_coordinatize, GreensStructure, PrincipalSeries, ReesCoordinatization};
use crate::pmap::PartialMap;
use crate::semigroup::GeneratedSemigroup;

pub struct LayerView<'a> {
    s: &'a GeneratedSemigroup,
    greens: &'a GreensStructure,
    series: &'a PrincipalSeries,
    pub layer: usize,
    pub j: u32,
    /// Number of columns (= rows) of the inverse square factor.
    pub q: usize,
    pub coord: ReesCoordinatization,
    /// One element per column, all in row 0 with trivial group coordinate.
    pub col_rep: Vec<usize>,
    /// Gamma restricted to the generators.
    pub gen_gamma: Vec<PartialMap>,
}

impl<'a> LayerView<'a> {
    pub fn new(
        s: &'a GeneratedSemigroup,
        greens: &'a GreensStructure,
        series: &'a PrincipalSeries,
        layer: usize,
    ) -> Result<Self> {
        let j = series.layer_j[layer];
        if !greens.regular_j[j as usize] {
            return Err(Error::NotRegular);
        }
        let coord = rees_coordinatize(s, greens, j)?;
        if !coord.is_inverse_square {
            return Err(Error::NotInverseSquare);
        }
        let q = coord.n_cols;
        let id = coord.group.identity;
        let col_rep: Vec<usize> = (0..q)
            .map(|c| coord.element_at[&(id, 0, c as u16)])
            .collect();
        let mut lv = LayerView {
            s,
            greens,
            series,
            layer,
            j,
            q,
            coord,
            col_rep,
            gen_gamma: Vec::new(),
        };
        lv.gen_gamma = (0..s.generator_count())
            .map(|gi| lv.gamma_by(|y| s.right_by_gen(y, gi)))
            .collect();
        lv.check_direction()?;
        Ok(lv)
    }

    fn gamma_by<F: Fn(usize) -> usize>(&self, mul: F) -> PartialMap {
        let mut images = vec![None; self.q];
        for (c, &y) in self.col_rep.iter().enumerate() {
            let z = mul(y);
            if self.series.layer_of_elem[z] == self.layer as u32 {
                let col = self.coord.col_of_l[&self.greens.l_of[z]];
                images[c] = Some(col);
            }
        }
        PartialMap::from_images(self.q, &images).expect("column indices are in range")
    }

    /// The action of an arbitrary element on the columns.
    pub fn gamma_of_element(&self, x: usize) -> PartialMap {
        self.gamma_by(|y| self.s.product(y, x))
    }

    /// Group coordinates of the column action: entry c is Some(g index of
    /// y_c·x) when the column survives, None when it is sent to theta.
    pub fn psi_of_element(&self, x: usize) -> Vec<Option<u16>> {
        self.col_rep
            .iter()
            .map(|&y| {
                let z = self.s.product(y, x);
                if self.series.layer_of_elem[z] == self.layer as u32 {
                    Some(self.coord.coords[&z].0)
                } else {
                    None
                }
            })
            .collect()
    }

    /// The element (1_G; row, col) of the layer.
    pub fn element_one(&self, row: usize, col: usize) -> usize {
        self.coord.element_at[&(self.coord.group.identity, row as u16, col as u16)]
    }

    /// Whether an element lies in this layer.
    pub fn in_layer(&self, x: usize) -> bool {
        self.series.layer_of_elem[x] == self.layer as u32
    }

    /// (group index, row, col) of a layer element.
    pub fn coords_of(&self, x: usize) -> (u16, u16, u16) {
        self.coord.coords[&x]
    }

    pub fn group_is_trivial(&self) -> bool {
        self.coord.group.order() == 1
    }

    /// Validates the composition order on all generator pairs: the action by
    /// right multiplication must satisfy Gamma(ab) = Gamma(a) then Gamma(b).
    /// The opposite order is a genuinely different convention; exactly one of
    /// the two can hold on a non-commutative layer, and this build uses the
    /// diagrammatic one throughout.
    fn check_direction(&self) -> Result<()> {
        let ng = self.s.generator_count();
        for a in 0..ng {
            let (_, ea) = self.s.generators()[a];
            for b in 0..ng {
                let (_, eb) = self.s.generators()[b];
                let ab = self.s.product(ea, eb);
                let composite = self.gen_gamma[a].then(&self.gen_gamma[b]);
                if self.gamma_of_element(ab) != composite {
                    return Err(Error::InternalInconsistency(
                        "column action is not a homomorphism in diagrammatic order".into(),
                    ));
                }
            }
        }
        Ok(())
    }
}

/// Full Gamma/Psi tables for every element; meant for small semigroups.
pub fn gamma_psi(
    s: &GeneratedSemigroup,
    greens: &GreensStructure,
    series: &PrincipalSeries,
    layer: usize,
) -> Result<Vec<(PartialMap, Vec<Option<u16>>)>> {
    let lv = LayerView::new(s, greens, series, layer)?;
    Ok((0..s.size())
        .map(|x| (lv.gamma_of_element(x), lv.psi_of_element(x)))
        .collect())
}
