//! Scene files: parsing, canonical text, and positioned errors.

use abpe::cli::scene::parse_scene;

fn main() -> abpe::Result<()> {
    let text = "# an annulus carrying uniform measures on both circles
basis: laurent center 0 poles 0
measure: circle label outer center 0 radius 1 mass 1
measure: circle center 0 radius 0.5 density \"1/pi\"
K: annulus center 0 inner 0.5 outer 1
";
    let scene = parse_scene(text)?;
    println!("{} components, total mass {:.10}", scene.components.len(), scene.measure()?.total_mass());
    print!("{}", scene.serialize());
    assert_eq!(parse_scene(&scene.serialize())?, scene);

    match parse_scene("measure: disk center 0 radius one density 1") {
        Err(e) => println!("rejected: {e}"),
        Ok(_) => unreachable!(),
    }
    Ok(())
}
