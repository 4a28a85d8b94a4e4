//! Writes the bundled mesh/field corpus: `cargo run --example export_corpus -- data`.

use std::path::PathBuf;

use morse_orbits::corpus;
use morse_orbits::io::{write_field, write_off};
use morse_orbits::plmorse::ScalarField;
use morse_orbits::surface::{validate_surface, TriSurface};

fn generic(s: &TriSurface, pred: impl Fn(usize, usize, usize) -> bool) -> ScalarField {
    corpus::search_field(s, 0, 5000, |md| md.is_generic && pred(md.c0, md.c1, md.c2))
        .expect("no generic field found")
        .1
}

fn main() -> std::io::Result<()> {
    let dir = PathBuf::from(std::env::args().nth(1).unwrap_or_else(|| "data".into()));
    std::fs::create_dir_all(&dir)?;
    let put = |mesh: &str, field: &str, s: &TriSurface, f: &ScalarField| -> std::io::Result<()> {
        std::fs::write(dir.join(format!("{mesh}.off")), write_off(s))?;
        std::fs::write(dir.join(format!("{mesh}.{field}.field")), write_field(f))
    };

    let tetra = validate_surface(&corpus::tetrahedron_triangles()).unwrap();
    put("sphere", "height", &tetra, &ScalarField::from_ints(&[0, 1, 2, 3]))?;
    let (s, f) = corpus::fan_disk(8);
    put("disk", "paraboloid", &s, &f)?;
    let (s, f) = corpus::annulus_product(8, 3);
    put("annulus", "product", &s, &f)?;
    let (s, f) = corpus::torus_circle_field(6, 4, 1);
    put("torus_grid", "fibration", &s, &f)?;
    let (s, f) = corpus::klein_circle_field(8, 4, 1);
    put("klein_grid", "fibration", &s, &f)?;
    let (s, f) = corpus::klein_circle_field(8, 4, 2);
    put("klein_grid", "double_fibration", &s, &f)?;
    let (s, f) = corpus::torus_height(8, 8);
    put("torus", "height", &s, &f)?;

    let csaszar = validate_surface(&corpus::csaszar_torus_triangles()).unwrap();
    put("csaszar", "generic", &csaszar, &ScalarField::from_ints(&[0, 1, 2, 3, 4, 5, 6]))?;
    let sphere = validate_surface(&corpus::bipyramid_triangles(10)).unwrap();
    put("bipyramid", "one_saddle", &sphere, &generic(&sphere, |_, c1, _| c1 == 1))?;
    let disk = validate_surface(&corpus::polar_disk_triangles(8, 3)).unwrap();
    put("polar_disk", "generic", &disk, &generic(&disk, |_, c1, _| c1 >= 2))?;
    let genus2 = corpus::genus2_surface(4);
    put("genus2", "generic", &genus2, &generic(&genus2, |_, c1, _| c1 >= 1))?;
    let mobius = corpus::mobius_grid(8, 3).surface();
    put("mobius", "generic", &mobius, &generic(&mobius, |_, c1, _| c1 >= 1))?;
    let klein = corpus::klein_grid(6, 4).surface();
    put("klein", "generic", &klein, &generic(&klein, |_, c1, _| c1 >= 1))?;
    Ok(())
}
