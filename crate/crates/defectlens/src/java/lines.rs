use defectlens_core::model::LineClass;
use tree_sitter::Node;

pub(crate) fn is_comment(kind: &str) -> bool {
    kind == "line_comment" || kind == "block_comment"
}

/// First and last row a node occupies; a node ending at column 0 does not
/// occupy the row it ends on.
pub(crate) fn row_range(node: Node<'_>) -> (usize, usize) {
    let (start, end) = (node.start_position(), node.end_position());
    if end.column == 0 && end.row > start.row {
        (start.row, end.row - 1)
    } else {
        (start.row, end.row)
    }
}

/// Classifies every line of a file. A line is comment if any part of it lies
/// in a comment and code if it holds any other token.
pub(crate) fn classify_lines(root: Node<'_>, line_count: usize) -> Vec<LineClass> {
    let mut code = vec![false; line_count];
    let mut comment = vec![false; line_count];
    let mut cursor = root.walk();
    let mut descend = true;
    loop {
        let node = cursor.node();
        if descend {
            let kind = node.kind();
            let (start, end) = row_range(node);
            let end = end.min(line_count.saturating_sub(1));
            if is_comment(kind) {
                comment[start..=end].iter_mut().for_each(|c| *c = true);
            } else if node.child_count() == 0 && node.start_byte() < node.end_byte() {
                code[start..=end].iter_mut().for_each(|c| *c = true);
            }
            if !is_comment(kind) && cursor.goto_first_child() {
                continue;
            }
        }
        if cursor.goto_next_sibling() {
            descend = true;
        } else if cursor.goto_parent() {
            descend = false;
        } else {
            break;
        }
    }
    code.into_iter()
        .zip(comment)
        .map(|pair| match pair {
            (true, true) => LineClass::Mixed,
            (true, false) => LineClass::Code,
            (false, true) => LineClass::Comment,
            (false, false) => LineClass::Blank,
        })
        .collect()
}
