use std::net::SocketAddr;
use std::path::PathBuf;

use clap::Parser;
use pairrank_service::{router, Config, DEFAULT_MAX_BODY_BYTES, DEFAULT_MAX_RECORDS};

#[derive(Parser, Debug)]
#[command(name = "pairrank-server", version, about = "Serve the pairrank HTTP API")]
struct Args {
    #[arg(long, default_value = "127.0.0.1")]
    host: String,
    #[arg(long, default_value_t = 8080)]
    port: u16,
    /// Directory with the built web UI, served at `/`.
    #[arg(long, value_name = "DIR")]
    static_dir: Option<PathBuf>,
    /// Largest accepted request body in bytes.
    #[arg(long, default_value_t = DEFAULT_MAX_BODY_BYTES)]
    max_body_bytes: usize,
    /// Largest accepted number of records per request.
    #[arg(long, default_value_t = DEFAULT_MAX_RECORDS)]
    max_records: usize,
}

#[tokio::main]
async fn main() {
    let args = Args::parse();
    let config = Config {
        max_body_bytes: args.max_body_bytes,
        max_records: args.max_records,
        static_dir: args.static_dir,
    };
    let address: SocketAddr = match format!("{}:{}", args.host, args.port).parse() {
        Ok(address) => address,
        Err(e) => {
            eprintln!("pairrank-server: invalid address {}:{}: {e}", args.host, args.port);
            std::process::exit(2);
        }
    };
    let listener = match tokio::net::TcpListener::bind(address).await {
        Ok(listener) => listener,
        Err(e) => {
            eprintln!("pairrank-server: cannot listen on {address}: {e}");
            std::process::exit(1);
        }
    };
    eprintln!("pairrank-server: listening on http://{address}");
    if let Err(e) = axum::serve(listener, router(config)).await {
        eprintln!("pairrank-server: {e}");
        std::process::exit(1);
    }
}
