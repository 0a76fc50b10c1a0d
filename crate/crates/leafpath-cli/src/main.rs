use std::io::{stderr, stdout, BufWriter, Write};

fn main() {
    let out = stdout();
    let mut out = BufWriter::new(out.lock());
    let code = leafpath_cli::run(std::env::args_os(), &mut out, &mut stderr());
    let _ = out.flush();
    std::process::exit(code);
}
