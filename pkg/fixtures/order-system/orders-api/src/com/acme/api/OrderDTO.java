package com.acme.api;

public class OrderDTO {
    private final String payload;

    public OrderDTO(String payload) {
        this.payload = payload;
    }

    public String payload() {
        return payload;
    }
}
