// Shared by the fuzz targets and the corpus replay test. Every function
// accepts arbitrary bytes and panics only when an invariant breaks.

use ultratree::document::{
    parse_space_json, parse_tree_json, to_json, SpaceDocument, TreeDocument, TreeInput,
};
use ultratree::{
    delta, generating_tree, is_ugvl, isometric, minimal_extension, representing_tree, Rat,
};

const MAX_SPACE_POINTS: usize = 10;
const MAX_TREE_VERTICES: usize = 40;

#[allow(dead_code)]
pub fn exercise_rat(data: &[u8]) {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(r) = text.parse::<Rat>() else { return };
    let shown = r.to_string();
    let back: Rat = shown.parse().expect("display output parses");
    assert_eq!(back, r);
    assert_eq!(back.to_string(), shown);
}

#[allow(dead_code)]
pub fn exercise_space_document(data: &[u8]) {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(space) = parse_space_json(text) else { return };
    assert_eq!(parse_space_json(&to_json(&SpaceDocument::from_space(&space))).unwrap(), space);
    if space.is_empty() || space.len() > MAX_SPACE_POINTS {
        return;
    }

    let yes = is_ugvl(&space).expect("nonempty valid space");
    let k = delta(&space).unwrap();
    assert_eq!(yes, k == 0);

    let tree = representing_tree(&space).unwrap();
    assert!(isometric(&tree.realize_space().unwrap(), &space));

    if yes {
        let generator = generating_tree(&space).unwrap();
        assert_eq!(generator.to_space().unwrap(), space);
    }
    let ext = minimal_extension(&space).unwrap();
    assert_eq!(ext.extended.len(), space.len() + k);
    assert!(is_ugvl(&ext.extended).unwrap());
}

#[allow(dead_code)]
pub fn exercise_tree_document(data: &[u8]) {
    let Ok(text) = std::str::from_utf8(data) else { return };
    let Ok(input) = parse_tree_json(text) else { return };
    match input {
        TreeInput::Free(tree) => {
            let doc = TreeDocument::from_labeled_tree(&tree);
            let again = parse_tree_json(&to_json(&doc)).unwrap();
            assert!(matches!(again, TreeInput::Free(t) if t == tree));
            if tree.len() > MAX_TREE_VERTICES {
                return;
            }
            let Ok(space) = tree.to_space() else {
                assert!(!tree.generates_ultrametric());
                return;
            };
            if space.len() <= MAX_SPACE_POINTS {
                assert!(is_ugvl(&space).unwrap(), "tree-generated spaces are UGVL");
            }
        }
        TreeInput::Rooted(tree) => {
            if tree.len() > MAX_TREE_VERTICES {
                return;
            }
            let Ok(space) = tree.realize_space() else { return };
            if space.len() <= MAX_SPACE_POINTS {
                assert!(representing_tree(&space).unwrap().is_isomorphic(&tree));
            }
        }
    }
}
