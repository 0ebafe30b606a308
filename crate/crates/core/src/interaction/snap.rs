use std::cmp::Ordering;

use crate::math::Point2;

use super::{Element, TargetLayout};

fn snap_key(e: &Element, p: Point2) -> (f64, f64, u32) {
    (e.rect_pt.distance_to(p), e.rect_pt.center().distance(p), e.id)
}

fn cmp_keys(a: &(f64, f64, u32), b: &(f64, f64, u32)) -> Ordering {
    a.0.total_cmp(&b.0).then(a.1.total_cmp(&b.1)).then(a.2.cmp(&b.2))
}

/// The element whose rectangle is nearest to `p`; ties go to the nearer centre and
/// then to the smaller id. `None` only for an empty layout.
pub fn snap_to_nearest(p: Point2, layout: &TargetLayout) -> Option<u32> {
    layout
        .elements
        .iter()
        .map(|e| snap_key(e, p))
        .min_by(cmp_keys)
        .map(|k| k.2)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interaction::Rect;

    fn el(id: u32, x: f64, y: f64, s: f64) -> Element {
        Element { id, rect_pt: Rect::new(x, y, s, s), is_target: false }
    }

    #[test]
    fn inside_point_snaps_to_its_element() {
        let l = TargetLayout::from_elements(vec![el(0, 0.0, 0.0, 50.0), el(1, 100.0, 0.0, 50.0)]);
        assert_eq!(snap_to_nearest(Point2::new(120.0, 10.0), &l), Some(1));
    }

    #[test]
    fn nearest_rect_not_nearest_centre() {
        let l = TargetLayout::from_elements(vec![el(0, 0.0, 0.0, 50.0), el(1, 200.0, 200.0, 100.0)]);
        assert_eq!(snap_to_nearest(Point2::new(100.0, 100.0), &l), Some(0));
        // a big element wins over a small one whose centre is closer
        let l = TargetLayout::from_elements(vec![el(0, 0.0, 0.0, 20.0), el(1, 40.0, 0.0, 100.0)]);
        assert_eq!(snap_to_nearest(Point2::new(32.0, 10.0), &l), Some(1));
    }

    #[test]
    fn ties_use_centre_then_id() {
        // p = (0, 25): rect distance 10 to both, centres at 65 vs 35
        let l = TargetLayout::from_elements(vec![el(0, 10.0, 0.0, 100.0), el(1, -60.0, 0.0, 50.0)]);
        assert_eq!(snap_to_nearest(Point2::new(0.0, 25.0), &l), Some(1));
        let l = TargetLayout::from_elements(vec![el(3, 10.0, 0.0, 50.0), el(2, -60.0, 0.0, 50.0)]);
        // p = (0, 25): both at rect distance 10 and centre distance 35
        assert_eq!(snap_to_nearest(Point2::new(0.0, 25.0), &l), Some(2));
    }

    #[test]
    fn empty_layout() {
        assert_eq!(snap_to_nearest(Point2::ZERO, &TargetLayout::from_elements(vec![])), None);
    }
}
