use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use bosegraph::graphs::parse_graph_named;
use bosegraph::{catalog_graph, complete_graph, dimer, pendant_complete, RootedGraph};

/// Resolve `catalog:<id> | file:<path> | complete:<L> | pendant:<L> | dimer`.
pub fn load_graph(spec: &str) -> Result<RootedGraph> {
    if spec == "dimer" {
        return Ok(dimer());
    }
    let Some((kind, arg)) = spec.split_once(':') else {
        bail!("unrecognised graph source '{spec}' (expected catalog:<id>, file:<path>, complete:<L>, pendant:<L> or dimer)");
    };
    let number = |what: &str| -> Result<usize> {
        arg.parse()
            .with_context(|| format!("{what} in graph source '{spec}' is not a non-negative integer"))
    };
    let graph = match kind {
        "catalog" => catalog_graph(number("catalog id")? as u32)?,
        "complete" => complete_graph(number("vertex count")?)?,
        "pendant" => pendant_complete(number("vertex count")?)?,
        "file" => {
            let path = Path::new(arg);
            let text = fs::read_to_string(path)
                .with_context(|| format!("cannot read graph file {}", path.display()))?;
            let name = path
                .file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| arg.to_string());
            parse_graph_named(&text, &name).with_context(|| format!("in graph file {}", path.display()))?
        }
        _ => bail!("unknown graph source kind '{kind}' in '{spec}'"),
    };
    Ok(graph)
}
