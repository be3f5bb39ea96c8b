use crate::bits::{BitStream, BitString};
use crate::dense::DenseFamily;
use crate::error::{Error, Result};
use crate::plane::PlaneCondition;

use super::PlaneFill;

/// Folds the first `horizon` densifiers from the empty condition, fills the
/// remaining cells and returns rows `0..rows`. The plane meets every set
/// below the horizon, so any finite selection of its rows is mutually
/// generic for the row-restricted family.
pub fn build_mutually_generic_sequence(
    family: &DenseFamily<PlaneCondition>,
    rows: usize,
    horizon: usize,
    fill: PlaneFill,
) -> Result<Vec<BitStream>> {
    if horizon > family.len() {
        return Err(Error::EmptyFamily {
            needed: horizon,
            available: family.len(),
        });
    }
    let p = family
        .iter()
        .take(horizon)
        .fold(PlaneCondition::new(), |p, set| set.densify(&p));
    Ok((0..rows)
        .map(|r| {
            let tail = fill.row(r);
            let width = p.max_col_in_row(r).map_or(0, |c| c + 1);
            let bits = (0..width)
                .map(|c| p.get(r, c).unwrap_or_else(|| tail.bit(c)))
                .collect();
            BitStream::new(BitString::from_bits(bits), tail)
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{mixed_plane_spec, plane_family, restrict_plane_family, square_spec};
    use crate::genericity::mutual_genericity_check;

    #[test]
    fn zero_rows_is_empty() {
        let fam = plane_family(&square_spec(4), 0).unwrap();
        assert!(build_mutually_generic_sequence(&fam, 0, 4, PlaneFill::Zero)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn horizon_past_family() {
        let fam = plane_family(&square_spec(4), 0).unwrap();
        assert!(matches!(
            build_mutually_generic_sequence(&fam, 1, 5, PlaneFill::Zero),
            Err(Error::EmptyFamily {
                needed: 5,
                available: 4
            })
        ));
    }

    #[test]
    fn small_subtuples_are_mutually_generic() {
        let spec = mixed_plane_spec(20, 3, 2);
        let fam = plane_family(&spec, 4).unwrap();
        let b =
            build_mutually_generic_sequence(&fam, 3, 20, PlaneFill::Seeded { seed: 9 }).unwrap();
        for rows in [vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 1, 2]] {
            let restricted = restrict_plane_family(&spec, 4, &rows).unwrap();
            assert!(!restricted.is_empty());
            let streams: Vec<_> = rows.iter().map(|r| b[*r].clone()).collect();
            let report = mutual_genericity_check(&streams, &restricted, 20, 128).unwrap();
            assert!(
                report.all_met(),
                "rows {rows:?}: unmet {:?}",
                report.unmet()
            );
        }
    }

    #[test]
    fn single_row_meets_its_sets() {
        let spec = mixed_plane_spec(12, 2, 0);
        let fam = plane_family(&spec, 0).unwrap();
        let b = build_mutually_generic_sequence(&fam, 1, 12, PlaneFill::Zero).unwrap();
        let restricted = restrict_plane_family(&spec, 0, &[0]).unwrap();
        assert!(mutual_genericity_check(&b, &restricted, 12, 64)
            .unwrap()
            .all_met());
    }
}
