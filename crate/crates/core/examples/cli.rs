//! Drives the command-line interface in-process: decompose the toy graph
//! into a temporary run directory and list what was written.

use cacose::graph::format::write_edge_list;
use cacose::io::cli::run_cli;
use cacose::synthetic::toy_graph;

fn main() -> cacose::Result<()> {
    let dir = std::env::temp_dir().join("cacose-cli-example");
    std::fs::create_dir_all(&dir).map_err(|e| cacose::Error::InvalidInput(e.to_string()))?;
    let input = dir.join("toy.edges");
    write_edge_list(&input, &toy_graph())?;
    let out = dir.join("decompose");
    let code = run_cli([
        "cacose",
        "decompose",
        "--input",
        input.to_str().unwrap(),
        "--out",
        out.to_str().unwrap(),
    ]);
    println!("exit code {code}");
    let mut files: Vec<_> = std::fs::read_dir(&out)
        .map_err(|e| cacose::Error::InvalidInput(e.to_string()))?
        .filter_map(|e| e.ok().map(|e| e.file_name().to_string_lossy().into_owned()))
        .collect();
    files.sort();
    println!("{}", files.join("\n"));
    Ok(())
}
