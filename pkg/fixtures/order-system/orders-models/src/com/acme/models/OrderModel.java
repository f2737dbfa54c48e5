package com.acme.models;

public class OrderModel {
    private String id;
    private String status;

    public static void checkSchema() {
        // schema is validated by the persistence layer
    }

    public boolean isTerminal() {
        return "SHIPPED".equals(status) || "CANCELLED".equals(status);
    }
}
