use super::{
    batcher_complete, bitonic_hypercube, contour_tree_sort, longest_path_sort, odd_even_transposition, product_sort_for,
    pyramid_sort, simulate_complete,
};
use crate::error::{Error, Result};
use crate::graph::{Family, Graph};
use crate::network::SortingNetwork;
use crate::routing::router_for;

/// Names accepted by [`build_named`].
pub const CONSTRUCTIONS: &[&str] =
    &["auto", "odd-even", "bitonic", "batcher", "contour", "simulate", "longest-path", "product", "pyramid"];

/// Moves a network built on a canonical copy of `g` onto `g` itself.
fn rehost(net: SortingNetwork, g: &Graph) -> Result<SortingNetwork> {
    if net.graph.edges() != g.edges() {
        return Err(Error::Structure(format!("{} does not fit this graph", net.provenance.construction)));
    }
    let cert = net.certificate.clone();
    let out = SortingNetwork::new(g.clone(), net.stages, net.order, net.provenance)?;
    Ok(match cert {
        Some(c) => out.with_certificate(c),
        None => out,
    })
}

fn is_path_numbered(g: &Graph) -> bool {
    g.num_edges() + 1 == g.n() && (1..g.n()).all(|i| g.has_edge(i - 1, i))
}

/// The construction picked for a graph from its family tag.
pub fn default_sorter(g: &Graph) -> Result<SortingNetwork> {
    match g.family() {
        Some(Family::Path(_)) | Some(Family::Hypercube(1)) => rehost(odd_even_transposition(g.n())?, g),
        Some(Family::Mesh(dims)) if dims.len() == 1 => rehost(odd_even_transposition(g.n())?, g),
        Some(Family::Complete(n)) => batcher_complete(*n),
        Some(Family::Hypercube(d)) => bitonic_hypercube(*d),
        Some(Family::Mesh(_)) | Some(Family::Product(..)) => product_sort_for(g),
        Some(Family::Star(_)) | Some(Family::RandomTree { .. }) => contour_tree_sort(g),
        Some(Family::Multipartite { .. }) => {
            simulate_complete(g, &batcher_complete(g.n())?, router_for(g)?.as_ref())
        }
        Some(Family::Pyramid { levels, dim }) => pyramid_sort(*levels, *dim),
        _ if g.n() == 1 || is_path_numbered(g) => rehost(odd_even_transposition(g.n())?, g),
        _ if g.is_tree() => contour_tree_sort(g),
        _ => longest_path_sort(g),
    }
}

/// Builds the construction called `name` (see [`CONSTRUCTIONS`]) on `g`.
pub fn build_named(name: &str, g: &Graph) -> Result<SortingNetwork> {
    if !g.is_connected() {
        return Err(Error::Structure("graph is disconnected".into()));
    }
    match name {
        "auto" => default_sorter(g),
        "odd-even" => rehost(odd_even_transposition(g.n())?, g),
        "bitonic" => match g.family() {
            Some(Family::Hypercube(d)) => bitonic_hypercube(*d),
            _ => Err(Error::Structure("bitonic needs a hypercube".into())),
        },
        "batcher" => rehost(batcher_complete(g.n())?, g),
        "contour" => contour_tree_sort(g),
        "simulate" => simulate_complete(g, &batcher_complete(g.n())?, router_for(g)?.as_ref()),
        "longest-path" => longest_path_sort(g),
        "product" => product_sort_for(g),
        "pyramid" => match g.family() {
            Some(Family::Pyramid { levels, dim }) => pyramid_sort(*levels, *dim),
            _ => Err(Error::Structure("pyramid construction needs a pyramid".into())),
        },
        other => Err(Error::Param(format!("unknown construction '{other}'; known: {}", CONSTRUCTIONS.join(", ")))),
    }
}
