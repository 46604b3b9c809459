fn main() { std::process::exit(qinfo::cli::run()); }
