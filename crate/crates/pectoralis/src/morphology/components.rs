//! Connected-component labeling and hole filling.

use crate::raster::BinaryMask;

use super::Connectivity;

/// Inclusive bounding box of one component.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Component {
    /// 1-based label; 0 in the label map means background.
    pub id: u32,
    pub pixel_count: u64,
    pub min_x: u32,
    pub min_y: u32,
    pub max_x: u32,
    pub max_y: u32,
}

/// Label map plus per-component summaries. Components are numbered by
/// first appearance in raster order, starting at 1.
#[derive(Clone, Debug)]
pub struct Labeling {
    width: u32,
    height: u32,
    labels: Vec<u32>,
    components: Vec<Component>,
}

impl Labeling {
    pub fn components(&self) -> &[Component] {
        &self.components
    }

    /// 0 for background, otherwise the component id.
    pub fn label_at(&self, x: u32, y: u32) -> u32 {
        assert!(x < self.width && y < self.height, "label_at out of bounds");
        self.labels[(y * self.width + x) as usize]
    }

    /// Pixels belonging to the component with the given id.
    pub fn mask_of(&self, id: u32) -> BinaryMask {
        BinaryMask::from_bits(
            self.width,
            self.height,
            self.labels.iter().map(|&l| l == id).collect(),
        )
        .expect("label map matches mask dimensions")
    }

    /// The component with the most pixels; ties go to the smaller id
    /// (earlier in raster order). None when the mask was empty.
    pub fn largest(&self) -> Option<&Component> {
        self.components
            .iter()
            .max_by(|a, b| a.pixel_count.cmp(&b.pixel_count).then(b.id.cmp(&a.id)))
    }
}

/// Two-pass union-find labeling of the true pixels of `mask`.
pub fn connected_components(mask: &BinaryMask, conn: Connectivity) -> Labeling {
    let w = mask.width() as i64;
    let h = mask.height() as i64;

    // Provisional labels, one per true pixel as encountered; merged via
    // union-find when forward neighbors carry different labels.
    let mut parent: Vec<u32> = Vec::new();
    let mut provisional = vec![0u32; (w * h) as usize]; // 0 = background

    fn find(parent: &mut [u32], mut i: u32) -> u32 {
        while parent[i as usize] != i {
            let up = parent[parent[i as usize] as usize];
            parent[i as usize] = up;
            i = up;
        }
        i
    }

    for y in 0..h {
        for x in 0..w {
            if !mask.get(x as u32, y as u32) {
                continue;
            }
            let mut label = u32::MAX;
            for &(dx, dy) in conn.forward_neighbors() {
                let (nx, ny) = (x + dx as i64, y + dy as i64);
                if nx < 0 || nx >= w || ny < 0 || ny >= h {
                    continue;
                }
                let nl = provisional[(ny * w + nx) as usize];
                if nl == 0 {
                    continue;
                }
                let root = find(&mut parent, nl - 1);
                if label == u32::MAX {
                    label = root;
                } else if root != label {
                    let (keep, fold) = if root < label { (root, label) } else { (label, root) };
                    parent[fold as usize] = keep;
                    label = keep;
                }
            }
            if label == u32::MAX {
                label = parent.len() as u32;
                parent.push(label);
            }
            provisional[(y * w + x) as usize] = label + 1;
        }
    }

    // Compact roots to consecutive ids in raster order of first appearance.
    let mut compact: Vec<u32> = vec![0; parent.len()];
    let mut components: Vec<Component> = Vec::new();
    let mut labels = vec![0u32; (w * h) as usize];
    for idx in 0..labels.len() {
        let p = provisional[idx];
        if p == 0 {
            continue;
        }
        let root = find(&mut parent, p - 1);
        let id = if compact[root as usize] != 0 {
            compact[root as usize]
        } else {
            let id = components.len() as u32 + 1;
            compact[root as usize] = id;
            components.push(Component {
                id,
                pixel_count: 0,
                min_x: u32::MAX,
                min_y: u32::MAX,
                max_x: 0,
                max_y: 0,
            });
            id
        };
        labels[idx] = id;
        let (x, y) = ((idx as i64 % w) as u32, (idx as i64 / w) as u32);
        let c = &mut components[(id - 1) as usize];
        c.pixel_count += 1;
        c.min_x = c.min_x.min(x);
        c.min_y = c.min_y.min(y);
        c.max_x = c.max_x.max(x);
        c.max_y = c.max_y.max(y);
    }

    Labeling {
        width: mask.width(),
        height: mask.height(),
        labels,
        components,
    }
}

/// Fill holes: background regions not connected to the image border
/// become foreground. `conn` is the foreground connectivity; background
/// is traversed with its dual so boundaries stay consistent.
pub fn fill_holes(mask: &BinaryMask, conn: Connectivity) -> BinaryMask {
    let w = mask.width() as i64;
    let h = mask.height() as i64;
    let bg_conn = conn.dual();
    let mut outside = vec![false; (w * h) as usize];
    let mut stack: Vec<(i64, i64)> = Vec::new();

    let seed = |x: i64, y: i64, outside: &mut Vec<bool>, stack: &mut Vec<(i64, i64)>| {
        if !mask.get(x as u32, y as u32) && !outside[(y * w + x) as usize] {
            outside[(y * w + x) as usize] = true;
            stack.push((x, y));
        }
    };
    for x in 0..w {
        seed(x, 0, &mut outside, &mut stack);
        seed(x, h - 1, &mut outside, &mut stack);
    }
    for y in 0..h {
        seed(0, y, &mut outside, &mut stack);
        seed(w - 1, y, &mut outside, &mut stack);
    }
    while let Some((x, y)) = stack.pop() {
        for &(dx, dy) in bg_conn.neighbors() {
            let (nx, ny) = (x + dx as i64, y + dy as i64);
            if nx < 0 || nx >= w || ny < 0 || ny >= h {
                continue;
            }
            let idx = (ny * w + nx) as usize;
            if !outside[idx] && !mask.get(nx as u32, ny as u32) {
                outside[idx] = true;
                stack.push((nx, ny));
            }
        }
    }

    BinaryMask::from_fn(mask.width(), mask.height(), |x, y| {
        mask.get(x, y) || !outside[(y as i64 * w + x as i64) as usize]
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_pixels_depend_on_connectivity() {
        let m = BinaryMask::from_fn(2, 2, |x, y| x == y);
        assert_eq!(
            connected_components(&m, Connectivity::Eight).components().len(),
            1
        );
        assert_eq!(
            connected_components(&m, Connectivity::Four).components().len(),
            2
        );
    }

    #[test]
    fn labels_cover_exactly_the_mask() {
        let m = BinaryMask::from_fn(7, 5, |x, y| (x * y) % 3 == 1);
        let lab = connected_components(&m, Connectivity::Eight);
        let total: u64 = lab.components().iter().map(|c| c.pixel_count).sum();
        assert_eq!(total, m.count_true() as u64);
        for y in 0..5 {
            for x in 0..7 {
                assert_eq!(lab.label_at(x, y) != 0, m.get(x, y));
            }
        }
    }

    #[test]
    fn component_masks_partition_the_mask() {
        let m = BinaryMask::from_fn(9, 6, |x, y| x % 4 != 3 && y != 2);
        let lab = connected_components(&m, Connectivity::Four);
        let mut union = BinaryMask::empty(9, 6);
        for c in lab.components() {
            let cm = lab.mask_of(c.id);
            assert_eq!(cm.count_true() as u64, c.pixel_count);
            assert!(cm.intersect(&union).is_empty(), "components overlap");
            union = union.union(&cm);
        }
        assert_eq!(union.bits(), m.bits());
    }

    #[test]
    fn bbox_is_tight() {
        let mut m = BinaryMask::empty(10, 10);
        for (x, y) in [(2, 3), (3, 3), (3, 4), (2, 5)] {
            m.set(x, y, true);
        }
        let lab = connected_components(&m, Connectivity::Eight);
        let c = lab.largest().unwrap();
        assert_eq!((c.min_x, c.min_y, c.max_x, c.max_y), (2, 3, 3, 5));
        assert_eq!(c.pixel_count, 4);
    }

    #[test]
    fn largest_breaks_ties_toward_first_seen() {
        let mut m = BinaryMask::empty(7, 1);
        m.set(1, 0, true);
        m.set(3, 0, true);
        m.set(5, 0, true);
        let lab = connected_components(&m, Connectivity::Four);
        assert_eq!(lab.largest().unwrap().id, 1);
    }

    #[test]
    fn u_shape_merges_into_one_component() {
        // Left arm gets one provisional label, right arm another; the
        // bottom bar forces a union.
        let m = BinaryMask::from_fn(5, 4, |x, y| x == 0 || x == 4 || y == 3);
        let lab = connected_components(&m, Connectivity::Four);
        assert_eq!(lab.components().len(), 1);
    }

    #[test]
    fn fill_holes_closes_donut() {
        let m = BinaryMask::from_fn(5, 5, |x, y| {
            (1..4).contains(&x) && (1..4).contains(&y) && !(x == 2 && y == 2)
        });
        let filled = fill_holes(&m, Connectivity::Eight);
        assert!(filled.get(2, 2));
        assert_eq!(filled.count_true(), 9);
    }

    #[test]
    fn diagonal_channel_drains_only_under_dual_connectivity() {
        // Background pixels (0,0)-(1,1)-(2,2) touch diagonally. With
        // 8-connected foreground the background walks 4-connected and the
        // interior two are sealed holes; with 4-connected foreground the
        // background walks 8-connected and escapes through the corner.
        let mut m = BinaryMask::filled(5, 5, true);
        m.set(0, 0, false);
        m.set(1, 1, false);
        m.set(2, 2, false);
        let f8 = fill_holes(&m, Connectivity::Eight);
        assert!(f8.get(1, 1) && f8.get(2, 2));
        assert!(!f8.get(0, 0), "border-touching background is not a hole");
        let f4 = fill_holes(&m, Connectivity::Four);
        assert_eq!(f4.bits(), m.bits());
    }

    #[test]
    fn open_field_stays_untouched() {
        let m = BinaryMask::from_fn(6, 6, |x, _| x < 3);
        let filled = fill_holes(&m, Connectivity::Eight);
        assert_eq!(filled.bits(), m.bits());
    }
}
