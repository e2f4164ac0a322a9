"""HTTP/websocket front end and the batch runner shared with the CLI."""
