//! Seeded instance generators.

use super::pancake::format_pancake_instance;
use super::routing::RoutingInstance;
use super::tile::{format_tile_instance, is_solvable, TileState, MAX_WIDTH};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::fmt;
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DomainKind {
    Graph,
    Tile,
    Pancake,
    Routing,
}

impl DomainKind {
    pub fn name(self) -> &'static str {
        match self {
            DomainKind::Graph => "graph",
            DomainKind::Tile => "tile",
            DomainKind::Pancake => "pancake",
            DomainKind::Routing => "routing",
        }
    }
}

impl fmt::Display for DomainKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for DomainKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "graph" => Ok(DomainKind::Graph),
            "tile" => Ok(DomainKind::Tile),
            "pancake" => Ok(DomainKind::Pancake),
            "routing" => Ok(DomainKind::Routing),
            other => Err(format!("unknown domain `{other}` (graph, tile, pancake, routing)")),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Instance {
    /// Row-major tiles, 0 = blank.
    Tile(Vec<u8>),
    /// Top-first stack.
    Pancake(Vec<u8>),
    Routing(RoutingInstance),
}

impl Instance {
    /// Text form in the domain's instance file format.
    pub fn to_text(&self) -> String {
        match self {
            Instance::Tile(t) => format!("{}\n", format_tile_instance(t)),
            Instance::Pancake(p) => format!("{}\n", format_pancake_instance(p)),
            Instance::Routing(r) => r.to_text(),
        }
    }
}

fn rng_for(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniformly random permutation of `1..=n`.
pub fn random_pancake(n: usize, seed: u64) -> Vec<u8> {
    let mut stack: Vec<u8> = (1..=n as u8).collect();
    stack.shuffle(&mut rng_for(seed));
    stack
}

/// Uniformly random solvable board of the given width.
pub fn random_tile(width: usize, seed: u64) -> Vec<u8> {
    let mut tiles: Vec<u8> = (0..(width * width) as u8).collect();
    tiles.shuffle(&mut rng_for(seed));
    let state = TileState::from_tiles(width, &tiles).expect("shuffle keeps a permutation");
    if !is_solvable(width, state) {
        // Swapping two non-blank tiles flips the permutation parity.
        let non_blank: Vec<usize> = (0..tiles.len()).filter(|&i| tiles[i] != 0).take(2).collect();
        tiles.swap(non_blank[0], non_blank[1]);
    }
    tiles
}

/// `n` points uniform in the unit square; the first is the depot.
pub fn random_routing(n: usize, seed: u64) -> RoutingInstance {
    let mut rng = rng_for(seed);
    let points = (0..n).map(|_| (rng.gen::<f64>(), rng.gen::<f64>())).collect();
    RoutingInstance::new(points).expect("unit-square points are valid")
}

/// Generates one instance. For tiles `size` is the board width.
pub fn generate_instance(domain: DomainKind, size: usize, seed: u64) -> Result<Instance, String> {
    match domain {
        DomainKind::Tile => {
            if !(2..=MAX_WIDTH).contains(&size) {
                return Err(format!("tile width {size} is not supported (2..={MAX_WIDTH})"));
            }
            Ok(Instance::Tile(random_tile(size, seed)))
        }
        DomainKind::Pancake => {
            if !(2..=super::pancake::MAX_PANCAKES).contains(&size) {
                return Err(format!("pancake count {size} is not supported"));
            }
            Ok(Instance::Pancake(random_pancake(size, seed)))
        }
        DomainKind::Routing => {
            if !(1..=super::routing::MAX_CITIES).contains(&size) {
                return Err(format!("routing size {size} is not supported"));
            }
            Ok(Instance::Routing(random_routing(size, seed)))
        }
        DomainKind::Graph => Err("graph instances come from files or the oracle's random_graph".to_string()),
    }
}
