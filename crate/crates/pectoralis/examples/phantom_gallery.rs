//! Render a small gallery of phantom variants: both edge families, both
//! textures, three noise levels. Each image is written next to its
//! ground-truth mask so the pairs can be eyeballed in any viewer.
//!
//!     cargo run --example phantom_gallery

use pectoralis::codec::{write_image, write_mask};
use pectoralis::phantom::{generate_phantom, PectoralEdge, PhantomSpec, Texture};

fn main() {
    let out = std::path::Path::new("target/example_out/phantom_gallery");
    std::fs::create_dir_all(out).expect("create output dir");

    let edges = [
        ("straight55", PectoralEdge::Straight { angle_deg: 55.0 }),
        (
            "curved",
            PectoralEdge::Curved {
                c0: 110.0,
                c1: -0.35,
                c2: -0.0009,
            },
        ),
    ];
    let textures = [("plain", Texture::Plain), ("fibrous", Texture::Fibrous)];
    let sigmas = [0.0, 6.0, 12.0];

    for (edge_name, edge) in edges {
        for (tex_name, texture) in textures {
            for sigma in sigmas {
                let spec = PhantomSpec {
                    edge,
                    texture,
                    noise_sigma: sigma,
                    seed: 7,
                    ..PhantomSpec::default()
                };
                let (img, truth, _) = generate_phantom(&spec).expect("valid spec");
                let stem = format!("{edge_name}_{tex_name}_s{sigma:02.0}");
                write_image(&img, out.join(format!("{stem}.pgm"))).expect("write image");
                write_mask(&truth, out.join(format!("{stem}.truth.pgm"))).expect("write truth");
                println!("{stem}.pgm");
            }
        }
    }
    println!("\nwrote 12 image/truth pairs under {}", out.display());
}
