//! Opening and closing on a corrupted mask.
//!
//!     cargo run --example morphology_playground
//!
//! Starts from a clean rectangle, sprinkles isolated specks outside it
//! and pinholes inside it, then shows how opening removes the specks
//! and closing fills the holes. The pipeline applies exactly this pair
//! (close then open, disk radii scaled to the image) to the raw Kapur
//! mask before picking the corner component.

use pectoralis::morphology::{close, connected_components, disk_se, open, Connectivity};
use pectoralis::raster::BinaryMask;

const W: u32 = 40;
const H: u32 = 16;

fn render(title: &str, m: &BinaryMask) {
    let comps = connected_components(m, Connectivity::Eight);
    println!(
        "{title}  ({} px set, {} component(s))",
        m.count_true(),
        comps.components().len()
    );
    for y in 0..m.height() {
        let row: String = (0..m.width())
            .map(|x| if m.get(x, y) { '#' } else { '.' })
            .collect();
        println!("  {row}");
    }
}

fn main() {
    let rect = BinaryMask::from_fn(W, H, |x, y| (6..30).contains(&x) && (3..13).contains(&y));

    let mut noisy = rect.clone();
    // pinholes inside, specks outside; both well clear of each other
    for (x, y) in [(11, 6), (12, 6), (20, 9), (25, 5)] {
        noisy.set(x, y, false);
    }
    for (x, y) in [(2, 2), (35, 4), (36, 4), (33, 12), (3, 14)] {
        noisy.set(x, y, true);
    }

    let se = disk_se(1);
    let closed = close(&noisy, &se);
    let opened = open(&closed, &se);

    render("input (rectangle + specks + pinholes):", &noisy);
    render("after close (holes filled, specks remain):", &closed);
    render("after close+open (specks gone):", &opened);

    // the corruption is gone; only the opening's corner rounding remains
    assert_eq!(opened, open(&rect, &se));
    println!("cleanup matches the clean rectangle's own opening");
}
