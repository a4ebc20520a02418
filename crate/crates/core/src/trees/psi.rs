//! The recursive bijection from rooted trees with `i` descents to Liu-Lyndon
//! trees with `i` red nodes.

use super::bicolored::{BicoloredTree, Color};
use super::families::is_liu_lyndon;
use super::rooted::RootedTree;
use crate::error::{arg, internal, Result};

/// Split off the subtree of the smallest child above the root (or of the
/// largest child when none is above) and recurse on both parts.
pub fn psi(t: &RootedTree) -> BicoloredTree {
    let root = t.root();
    let kids = t.children(root);
    let Some(&largest) = kids.iter().max() else {
        return BicoloredTree::leaf(root);
    };
    let x = kids.iter().copied().filter(|&c| c > root).min().unwrap_or(largest);
    let color = if x > root { Color::Blue } else { Color::Red };
    BicoloredTree::node(color, psi(&t.without_subtree(x)), psi(&t.subtree(x)))
}

pub fn psi_inverse(t: &BicoloredTree) -> Result<RootedTree> {
    if !is_liu_lyndon(t) {
        return arg(format!("{t} is not a Liu-Lyndon tree"));
    }
    let out = unpsi(t)?;
    if psi(&out) != *t {
        return internal(format!("inverse of {t} does not map back"));
    }
    Ok(out)
}

fn unpsi(t: &BicoloredTree) -> Result<RootedTree> {
    match t {
        BicoloredTree::Leaf(l) => Ok(RootedTree::single(*l)),
        BicoloredTree::Node(_, l, r) => {
            let base = unpsi(l)?;
            base.graft(base.root(), &unpsi(r)?)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn examples() {
        let one = RootedTree::parse("4").unwrap();
        assert_eq!(psi(&one), BicoloredTree::leaf(4));
        let edge = RootedTree::parse("1(2)").unwrap();
        assert_eq!(psi(&edge).to_string(), "[1,2]");
        let cherry = RootedTree::parse("2(1,3)").unwrap();
        let image = psi(&cherry);
        assert_eq!(image.to_string(), "[<2,1>,3]");
        assert_eq!(psi_inverse(&image).unwrap(), cherry);
        assert!(psi_inverse(&BicoloredTree::parse("[2,1]").unwrap()).is_err());
    }
}
