// Payload shapes of the backend HTTP API. The UI is a pure client of these
// documented routes and fields; nothing here is invented client-side.
export {};
