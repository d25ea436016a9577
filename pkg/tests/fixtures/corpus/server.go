package main

import (
	"fmt"
	"net/http"
)

// healthHandler answers liveness probes.
func healthHandler(w http.ResponseWriter, r *http.Request) {
	fmt.Fprintln(w, "ok")
}

func main() {
	http.HandleFunc("/health", healthHandler)
	/* Port is fixed; the deployment layer remaps it. */
	http.ListenAndServe(":8080", nil)
}
