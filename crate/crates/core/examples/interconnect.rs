//! Lists the port-B sources each cell of a small array can read, with and
//! without the diagonal link.

use rcfir::array::{reachable_sources, resolve_source, ArrayConfig, CellCoord, PortSource};

fn main() {
    for diag in [false, true] {
        let cfg = ArrayConfig::square(8).unwrap().with_diagonal(diag);
        println!("8x8 array, diagonal link {}", if diag { "on" } else { "off" });
        for coord in [CellCoord::new(0, 0), CellCoord::new(3, 5), CellCoord::new(7, 7)] {
            let names: Vec<String> = reachable_sources(coord, &cfg)
                .iter()
                .map(PortSource::to_string)
                .collect();
            println!("  {coord}: {}", names.join(" "));
        }
    }

    let cfg = ArrayConfig::square(8).unwrap();
    let coord = CellCoord::new(3, 5);
    for name in ["west", "intra_quad_row[0]", "express_row", "express_col", "south_west"] {
        let src: PortSource = name.parse().unwrap();
        match resolve_source(coord, src, &cfg) {
            Ok(r) => println!("{coord} {name} -> {r:?}"),
            Err(e) => println!("{coord} {name} -> error: {e}"),
        }
    }
}
