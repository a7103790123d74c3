fn main() {
    std::process::exit(diskgroups_cli::cli_main(std::env::args_os()));
}
