fn main() {
    std::process::exit(adtfree::cli::cli_main(std::env::args_os()));
}
