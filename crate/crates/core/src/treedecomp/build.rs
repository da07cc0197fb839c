use super::{TdBuilder, TreeDecomposition};
use crate::constructions::{NGadget, TreeLeafPath};
use crate::graph::{Vertex, VertexSet};

/// Leaf interval `[first, last]` of heap node `h` in a tree of `depth`.
fn interval(h: usize, depth: u32) -> (usize, usize) {
    let level = usize::BITS - 1 - (h + 1).leading_zeros();
    let span = 1usize << (depth - level);
    let pos = h + 1 - (1 << level);
    (pos * span, (pos + 1) * span - 1)
}

fn bag(vs: impl IntoIterator<Item = Vertex>) -> VertexSet {
    vs.into_iter().collect()
}

/// Width-3 decomposition. Each internal node `v` with leaf interval
/// `[a, b]` split at `m` gets three bags: `{v, parent, l_a, l_b}`, then
/// `{v, l_a, l_b, l_{m+1}}` carrying the right subtree, then
/// `{v, l_a, l_{m+1}, l_m}` carrying the left subtree and the leaf-path
/// edge `l_m l_{m+1}`.
pub fn decompose_tree_leaf_path(t: &TreeLeafPath) -> TreeDecomposition {
    let mut b = TdBuilder::default();
    let leaf = |i: usize| t.leaves[i];
    let mut stack = vec![(0usize, None::<usize>)];
    while let Some((h, parent_node)) = stack.pop() {
        let v = t.root + h;
        let parent = t.parent(h).map(|p| t.root + p);
        let (a, last) = interval(h, t.depth);
        if a == last {
            b.node(bag(std::iter::once(v).chain(parent)), parent_node);
            continue;
        }
        let m = (a + last) / 2;
        let top = b.node(
            bag([v, leaf(a), leaf(last)].into_iter().chain(parent)),
            parent_node,
        );
        let right = b.node(bag([v, leaf(a), leaf(last), leaf(m + 1)]), Some(top));
        let left = b.node(bag([v, leaf(a), leaf(m + 1), leaf(m)]), Some(right));
        stack.push((2 * h + 2, Some(right)));
        stack.push((2 * h + 1, Some(left)));
    }
    b.finish()
}

/// Width-at-most-6 decomposition of the gadget.
///
/// Group the bottom path into pairs `G_i = {thick[2i], thick[2i+1]}`. Leaf
/// `i` touches `G_i` and `G_{i+1}`, so a tree node with leaf interval
/// `[a, b]` sees the groups `G_a` and `G_{b+1}`. Each internal node gets a
/// bag with its parent and both boundary groups, and below it a bag with the
/// middle group `G_{m+1}` as well, carrying both subtrees. Leaves get
/// `{leaf, parent} ∪ G_i ∪ G_{i+1}`. Every subdivided segment or pendant is
/// then hung off a bag holding both of its ends as a chain of triangles.
pub fn decompose_n_gadget(ng: &NGadget) -> TreeDecomposition {
    let l = &ng.labels;
    let depth = l.params.depth;
    let group = |i: usize| [l.thick[2 * i], l.thick[2 * i + 1]];
    let parent_of = |h: usize| (h > 0).then(|| l.root + (h - 1) / 2);

    let mut b = TdBuilder::default();
    let mut leaf_node = vec![0usize; l.leaves.len()];
    let mut stack = vec![(0usize, None::<usize>)];
    while let Some((h, parent_node)) = stack.pop() {
        let v = l.root + h;
        let (a, last) = interval(h, depth);
        let outer = group(a).into_iter().chain(group(last + 1));
        let top = b.node(
            bag(std::iter::once(v).chain(parent_of(h)).chain(outer)),
            parent_node,
        );
        if a == last {
            leaf_node[a] = top;
            continue;
        }
        let m = (a + last) / 2;
        let split = b.node(
            bag(std::iter::once(v)
                .chain(group(a))
                .chain(group(m + 1))
                .chain(group(last + 1))),
            Some(top),
        );
        stack.push((2 * h + 2, Some(split)));
        stack.push((2 * h + 1, Some(split)));
    }

    let chain = |b: &mut TdBuilder, at: usize, path: &[Vertex]| {
        let end = *path.last().unwrap();
        let mut prev = at;
        for w in path[..path.len() - 1].windows(2) {
            prev = b.node(bag([w[0], w[1], end]), Some(prev));
        }
    };
    if l.params.path_length > 1 {
        let leaves = l.leaves.len();
        for (i, &node) in leaf_node.iter().enumerate() {
            chain(&mut b, node, &l.pendant_path(i, false));
            chain(&mut b, node, &l.pendant_path(i, true));
        }
        for j in 0..l.segments.len() {
            let node = leaf_node[(j / 2).min(leaves - 1)];
            chain(&mut b, node, &l.segment_path(j));
        }
    }
    b.finish()
}
