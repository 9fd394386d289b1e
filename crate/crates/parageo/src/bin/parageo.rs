fn main() { parageo::cli::main(); }
